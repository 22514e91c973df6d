//! The Hermitian unital `x^{q+1} + y^{q+1} + z^{q+1} = 0` in PG(2, q^2), its
//! tangent/secant classification, and the O'Nan (Pasch) configuration search.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::plane::ProjectivePlane;
use crate::report::Report;

/// A point set with blocks ("lines") of size at least 2, any two points on at
/// most one block. Points and blocks are numbered from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialLinearSpace {
    n_points: usize,
    lines: Vec<Vec<u32>>,
    /// `pair_line[a * n + b]` is the block through `a` and `b`, or `NONE`.
    pair_line: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl PartialLinearSpace {
    pub fn new(n_points: usize, mut lines: Vec<Vec<u32>>) -> Result<Self> {
        let mut pair_line = vec![NONE; n_points * n_points];
        for (li, line) in lines.iter_mut().enumerate() {
            line.sort_unstable();
            if line.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvariantViolation(format!("line {li} repeats a point")));
            }
            if let Some(&p) = line.iter().find(|&&p| p as usize >= n_points) {
                return Err(Error::InvariantViolation(format!("line {li} has point {p} out of range")));
            }
            for (i, &a) in line.iter().enumerate() {
                for &b in &line[i + 1..] {
                    let slot = a as usize * n_points + b as usize;
                    if pair_line[slot] != NONE {
                        return Err(Error::InvariantViolation(format!(
                            "points {a} and {b} lie on lines {} and {li}",
                            pair_line[slot]
                        )));
                    }
                    pair_line[slot] = li as u32;
                    pair_line[b as usize * n_points + a as usize] = li as u32;
                }
            }
        }
        Ok(PartialLinearSpace {
            n_points,
            lines,
            pair_line,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn line_through(&self, a: u32, b: u32) -> Option<u32> {
        if a == b {
            return None;
        }
        let l = self.pair_line[a as usize * self.n_points + b as usize];
        (l != NONE).then_some(l)
    }

    /// Common point of two distinct lines.
    pub fn meet(&self, l1: u32, l2: u32) -> Option<u32> {
        if l1 == l2 {
            return None;
        }
        let (a, b) = (&self.lines[l1 as usize], &self.lines[l2 as usize]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(a[i]),
            }
        }
        None
    }

    pub fn lines_through(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.n_points];
        for (li, line) in self.lines.iter().enumerate() {
            for &p in line {
                out[p as usize].push(li as u32);
            }
        }
        out
    }
}

/// Four lines pairwise meeting in six distinct points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OnanWitness {
    pub lines: [u32; 4],
    pub points: [u32; 6],
}

impl OnanWitness {
    fn from_lines(space: &PartialLinearSpace, mut lines: [u32; 4]) -> Option<Self> {
        lines.sort_unstable();
        let mut pts = [0u32; 6];
        let mut k = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                pts[k] = space.meet(lines[i], lines[j])?;
                k += 1;
            }
        }
        let mut sorted = pts;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(OnanWitness {
            lines,
            points: sorted,
        })
    }

    /// Checks the 4x3 incidence pattern directly.
    pub fn is_valid(&self, space: &PartialLinearSpace) -> bool {
        let mut per_point = [0; 6];
        for &l in &self.lines {
            let line = &space.lines()[l as usize];
            let on: Vec<usize> = (0..6).filter(|&i| line.binary_search(&self.points[i]).is_ok()).collect();
            if on.len() != 3 {
                return false;
            }
            for i in on {
                per_point[i] += 1;
            }
        }
        per_point.iter().all(|&c| c == 2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OnanMode {
    /// Every 4-subset of lines; refused when `C(lines, 4)` exceeds the budget.
    Exhaustive,
    /// Intersecting line triples first, expanding at most `budget` triangles
    /// in increasing ID order.
    Pruned,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnanSearch {
    pub witnesses: Vec<OnanWitness>,
    /// False when the pruned frontier was cut off by the budget.
    pub complete: bool,
    /// Quadruples (exhaustive) or triangles (pruned) examined.
    pub examined: u64,
}

fn choose4(n: u128) -> u128 {
    if n < 4 {
        0
    } else {
        n * (n - 1) * (n - 2) * (n - 3) / 24
    }
}

pub fn find_onan_configurations(space: &PartialLinearSpace, mode: OnanMode, budget: u64) -> Result<OnanSearch> {
    match mode {
        OnanMode::Exhaustive => exhaustive_onan(space, budget),
        OnanMode::Pruned => Ok(triple_first_onan(space, budget)),
    }
}

fn exhaustive_onan(space: &PartialLinearSpace, budget: u64) -> Result<OnanSearch> {
    let n = space.lines().len();
    let needed = choose4(n as u128);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let n = n as u32;
    let mut witnesses = Vec::new();
    let mut examined = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    examined += 1;
                    if let Some(w) = OnanWitness::from_lines(space, [a, b, c, d]) {
                        witnesses.push(w);
                    }
                }
            }
        }
    }
    Ok(OnanSearch {
        witnesses,
        complete: true,
        examined,
    })
}

fn triple_first_onan(space: &PartialLinearSpace, budget: u64) -> OnanSearch {
    let through = space.lines_through();
    let lines = space.lines();
    let mut found = BTreeSet::new();
    let mut examined = 0u64;
    for s1 in 0..lines.len() as u32 {
        let l1 = &lines[s1 as usize];
        for &p12 in l1 {
            for &s2 in through[p12 as usize].iter().filter(|&&s| s > s1) {
                for &p13 in l1.iter().filter(|&&p| p != p12) {
                    for &s3 in through[p13 as usize].iter().filter(|&&s| s > s2) {
                        let Some(p23) = space.meet(s2, s3) else { continue };
                        if p23 == p12 || p23 == p13 {
                            continue;
                        }
                        if examined == budget {
                            return OnanSearch {
                                witnesses: found.into_iter().collect(),
                                complete: false,
                                examined,
                            };
                        }
                        examined += 1;
                        // The fourth line joins a new point of s1 to a new point of s2
                        // and must cross s3 away from the triangle's vertices.
                        for &x in l1.iter().filter(|&&x| x != p12 && x != p13) {
                            for &y in lines[s2 as usize].iter().filter(|&&y| y != p12 && y != p23) {
                                let Some(s4) = space.line_through(x, y) else { continue };
                                if s4 <= s3 {
                                    continue;
                                }
                                let Some(z) = space.meet(s4, s3) else { continue };
                                if z == p13 || z == p23 {
                                    continue;
                                }
                                if let Some(w) = OnanWitness::from_lines(space, [s1, s2, s3, s4]) {
                                    found.insert(w);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    OnanSearch {
        witnesses: found.into_iter().collect(),
        complete: true,
        examined,
    }
}

/// The Hermitian unital together with the classification of all plane lines.
#[derive(Clone, Debug)]
pub struct Unital {
    q: u64,
    /// Plane IDs of the absolute points, sorted. Unital point `i` is `point_ids[i]`.
    point_ids: Vec<u32>,
    /// Plane line IDs of tangents, sorted.
    tangents: Vec<u32>,
    /// Plane line IDs of secants, sorted. Secant `i` is `secants[i]`.
    secants: Vec<u32>,
    /// Per secant, the sorted unital point IDs on it.
    secant_points: Vec<Vec<u32>>,
    /// Per tangent, its single unital point ID.
    tangent_points: Vec<u32>,
}

impl Unital {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn point_ids(&self) -> &[u32] {
        &self.point_ids
    }

    pub fn tangents(&self) -> &[u32] {
        &self.tangents
    }

    pub fn secants(&self) -> &[u32] {
        &self.secants
    }

    pub fn secant_points(&self) -> &[Vec<u32>] {
        &self.secant_points
    }

    pub fn tangent_points(&self) -> &[u32] {
        &self.tangent_points
    }

    pub fn n_points(&self) -> usize {
        self.point_ids.len()
    }

    /// Unital points with secants as blocks.
    pub fn linear_space(&self) -> PartialLinearSpace {
        PartialLinearSpace::new(self.n_points(), self.secant_points.clone())
            .expect("secants of a plane meet in at most one point")
    }

    /// `U <q> <n_points> <n_secants>` then `S <secant> : <unital points>`.
    pub fn dump(&self) -> String {
        let mut out = format!("U {} {} {}\n", self.q, self.n_points(), self.secants.len());
        for (i, pts) in self.secant_points.iter().enumerate() {
            write!(out, "S {i} :").unwrap();
            for p in pts {
                write!(out, " {p}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn find_onan_configurations(&self, mode: OnanMode, budget: u64) -> Result<OnanSearch> {
        find_onan_configurations(&self.linear_space(), mode, budget)
    }

    /// Per-invariant report on the Steiner `(q+1)`-tuple structure.
    pub fn verify_design(&self) -> Report {
        let q = self.q;
        let n = self.n_points();
        let mut report = Report::new();

        let mut cover = vec![0u32; n * n];
        for pts in &self.secant_points {
            for (i, &a) in pts.iter().enumerate() {
                for &b in &pts[i + 1..] {
                    cover[a as usize * n + b as usize] += 1;
                }
            }
        }
        let mut bad_pair = None;
        'outer: for a in 0..n {
            for b in a + 1..n {
                let c = cover[a * n + b];
                if c != 1 {
                    bad_pair = Some(format!("pair ({a}, {b}) covered {c} times"));
                    break 'outer;
                }
            }
        }
        report.push_first_failure("pair_coverage", bad_pair);

        let block = q as usize + 1;
        let bad_size = self
            .secant_points
            .iter()
            .position(|p| p.len() != block)
            .map(|i| format!("secant {i} has {} points", self.secant_points[i].len()));
        report.push_first_failure("secant_size", bad_size);

        let mut secants_at = vec![0u64; n];
        for pts in &self.secant_points {
            for &p in pts {
                secants_at[p as usize] += 1;
            }
        }
        let bad = secants_at
            .iter()
            .position(|&c| c != q * q)
            .map(|p| format!("point {p} lies on {} secants", secants_at[p]));
        report.push_first_failure("secants_per_point", bad);

        let mut tangents_at = vec![0u64; n];
        for &p in &self.tangent_points {
            tangents_at[p as usize] += 1;
        }
        let bad = tangents_at
            .iter()
            .position(|&c| c != 1)
            .map(|p| format!("point {p} lies on {} tangents", tangents_at[p]));
        report.push_first_failure("tangents_per_point", bad);

        let pairs_total = (n * n.saturating_sub(1) / 2) as u64;
        let pairs_blocks: u64 = self
            .secant_points
            .iter()
            .map(|p| (p.len() * p.len().saturating_sub(1) / 2) as u64)
            .sum();
        report.push(
            "pair_count_identity",
            pairs_total == pairs_blocks,
            Some(format!("C({n},2) = {pairs_total}, secant pairs = {pairs_blocks}")),
        );
        report
    }

    #[cfg(test)]
    pub(crate) fn without_secant(&self, idx: usize) -> Unital {
        let mut u = self.clone();
        u.secants.remove(idx);
        u.secant_points.remove(idx);
        u
    }
}

/// Builds the Hermitian unital and classifies every line of the plane.
///
/// Any count that disagrees with the unital parameters is a hard error.
pub fn build_unital(plane: &ProjectivePlane) -> Result<Unital> {
    let field = plane.field();
    let q = field.q();
    let norms: Vec<Elem> = field.elements().map(|x| field.hermitian_norm(x)).collect();
    let mut local = vec![u32::MAX; plane.points().len()];
    let mut point_ids = Vec::new();
    for (i, v) in plane.points().iter().enumerate() {
        let s = v
            .iter()
            .fold(Elem::ZERO, |acc, x| field.add(acc, norms[x.0 as usize]));
        if s.is_zero() {
            local[i] = point_ids.len() as u32;
            point_ids.push(i as u32);
        }
    }
    let expect = |what: &str, got: u64, want: u64| -> Result<()> {
        if got == want {
            Ok(())
        } else {
            Err(Error::InvariantViolation(format!("{what}: got {got}, expected {want}")))
        }
    };
    expect("unital points", point_ids.len() as u64, q * q * q + 1)?;

    let mut tangents = Vec::new();
    let mut tangent_points = Vec::new();
    let mut secants = Vec::new();
    let mut secant_points = Vec::new();
    for (li, line) in plane.lines().iter().enumerate() {
        let on: Vec<u32> = line
            .points
            .iter()
            .map(|&p| local[p as usize])
            .filter(|&u| u != u32::MAX)
            .collect();
        match on.len() as u64 {
            1 => {
                tangents.push(li as u32);
                tangent_points.push(on[0]);
            }
            k if k == q + 1 => {
                secants.push(li as u32);
                secant_points.push(on);
            }
            k => {
                return Err(Error::InvariantViolation(format!(
                    "line {li} meets the unital in {k} points"
                )))
            }
        }
    }
    expect("tangents", tangents.len() as u64, q * q * q + 1)?;
    expect("secants", secants.len() as u64, q * q * (q * q - q + 1))?;

    let n = point_ids.len();
    let mut secants_at = vec![0u64; n];
    for pts in &secant_points {
        for &p in pts {
            secants_at[p as usize] += 1;
        }
    }
    if let Some(p) = secants_at.iter().position(|&c| c != q * q) {
        expect(&format!("secants through unital point {p}"), secants_at[p], q * q)?;
    }
    let mut tangents_at = vec![0u64; n];
    for &p in &tangent_points {
        tangents_at[p as usize] += 1;
    }
    if let Some(p) = tangents_at.iter().position(|&c| c != 1) {
        expect(&format!("tangents through unital point {p}"), tangents_at[p], 1)?;
    }

    Ok(Unital {
        q,
        point_ids,
        tangents,
        secants,
        secant_points,
        tangent_points,
    })
}
