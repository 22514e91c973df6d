//! Points and lines of PG(2, q^2).
//!
//! A point is a normalized homogeneous triple whose leftmost nonzero
//! coordinate is 1. Points are numbered by shape class: `(0,0,1)` first, then
//! `(0,1,z)`, then `(1,y,z)`, each block ordered by element code. Lines use the
//! same normalization on their dual coordinates, so line `i` has the same
//! coordinate triple as point `i`.

use std::fmt::Write as _;

use crate::field::{Elem, FieldSpec};

pub type Triple = [Elem; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjLine {
    pub coords: Triple,
    /// Sorted IDs of the `q^2 + 1` incident points.
    pub points: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct ProjectivePlane {
    field: FieldSpec,
    points: Vec<Triple>,
    lines: Vec<ProjLine>,
}

/// Number of points (and of lines) of PG(2, s) for a field of order `s`.
pub fn plane_size(order: u64) -> u64 {
    order * order + order + 1
}

/// Canonical representative of a nonzero triple, or `None` for the zero vector.
pub fn normalize(field: &FieldSpec, v: Triple) -> Option<Triple> {
    let lead = v.iter().copied().find(|x| !x.is_zero())?;
    let inv = field.inv(lead).ok()?;
    Some(v.map(|x| field.mul(x, inv)))
}

/// Stable ID of a normalized triple.
pub fn triple_index(field: &FieldSpec, v: &Triple) -> u32 {
    let s = field.q2() as u32;
    match (v[0].0, v[1].0) {
        (0, 0) => 0,
        (0, _) => 1 + v[2].0,
        _ => 1 + s + v[1].0 * s + v[2].0,
    }
}

pub fn dot(field: &FieldSpec, u: &Triple, v: &Triple) -> Elem {
    let s = field.add(field.mul(u[0], v[0]), field.mul(u[1], v[1]));
    field.add(s, field.mul(u[2], v[2]))
}

pub fn cross(field: &FieldSpec, u: &Triple, v: &Triple) -> Triple {
    let c = |i: usize, j: usize| field.sub(field.mul(u[i], v[j]), field.mul(u[j], v[i]));
    [c(1, 2), c(2, 0), c(0, 1)]
}

/// The Hermitian form `sigma(a, b) = sum a_i b_i^q` on representative triples.
pub fn hermitian_form(field: &FieldSpec, a: &Triple, b: &Triple) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| {
        field.add(acc, field.mul(x, field.frobenius_q(y)))
    })
}

fn enumerate_triples(field: &FieldSpec) -> Vec<Triple> {
    let s = field.q2() as u32;
    let mut out = Vec::with_capacity(plane_size(field.q2()) as usize);
    out.push([Elem::ZERO, Elem::ZERO, Elem::ONE]);
    for z in 0..s {
        out.push([Elem::ZERO, Elem::ONE, Elem(z)]);
    }
    for y in 0..s {
        for z in 0..s {
            out.push([Elem::ONE, Elem(y), Elem(z)]);
        }
    }
    out
}

/// Point IDs on the line `a x + b y + c z = 0`, solved directly per shape class.
fn incident_points(field: &FieldSpec, line: &Triple) -> Vec<u32> {
    let s = field.q2() as u32;
    let [a, b, c] = *line;
    let mut pts = Vec::with_capacity(s as usize + 1);
    if c.is_zero() {
        pts.push(0);
    }
    // (0, 1, z): b + c z = 0
    if c.is_zero() {
        if b.is_zero() {
            pts.extend((0..s).map(|z| 1 + z));
        }
    } else {
        let z = field.div(field.neg(b), c).expect("c is nonzero");
        pts.push(1 + z.0);
    }
    // (1, y, z): a + b y + c z = 0
    if c.is_zero() {
        if !b.is_zero() {
            let y = field.div(field.neg(a), b).expect("b is nonzero");
            pts.extend((0..s).map(|z| 1 + s + y.0 * s + z));
        }
    } else {
        let cinv = field.inv(c).expect("c is nonzero");
        for y in 0..s {
            let rhs = field.neg(field.add(a, field.mul(b, Elem(y))));
            let z = field.mul(rhs, cinv);
            pts.push(1 + s + y * s + z.0);
        }
    }
    pts.sort_unstable();
    pts
}

impl ProjectivePlane {
    /// Enumerates all points and lines of PG(2, q^2) over `field`.
    pub fn new(field: FieldSpec) -> Self {
        let points = enumerate_triples(&field);
        let lines = points
            .iter()
            .map(|coords| ProjLine {
                coords: *coords,
                points: incident_points(&field, coords),
            })
            .collect();
        ProjectivePlane { field, points, lines }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn points(&self) -> &[Triple] {
        &self.points
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn point_index(&self, v: &Triple) -> Option<u32> {
        normalize(&self.field, *v).map(|n| triple_index(&self.field, &n))
    }

    pub fn incident(&self, point: u32, line: u32) -> bool {
        dot(&self.field, &self.points[point as usize], &self.lines[line as usize].coords).is_zero()
    }

    /// The unique line through two distinct points.
    pub fn join(&self, p1: u32, p2: u32) -> Option<u32> {
        let l = cross(&self.field, &self.points[p1 as usize], &self.points[p2 as usize]);
        normalize(&self.field, l).map(|n| triple_index(&self.field, &n))
    }

    /// The unique common point of two distinct lines.
    pub fn meet(&self, l1: u32, l2: u32) -> Option<u32> {
        let v = cross(
            &self.field,
            &self.lines[l1 as usize].coords,
            &self.lines[l2 as usize].coords,
        );
        normalize(&self.field, v).map(|n| triple_index(&self.field, &n))
    }

    /// Text dump: `point <id> <x> <y> <z>` and `line <id> <a> <b> <c> : <ids>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, [x, y, z]) in self.points.iter().enumerate() {
            writeln!(out, "point {i} {x} {y} {z}").unwrap();
        }
        for (i, line) in self.lines.iter().enumerate() {
            let [a, b, c] = line.coords;
            write!(out, "line {i} {a} {b} {c} :").unwrap();
            for p in &line.points {
                write!(out, " {p}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(q: u64) -> ProjectivePlane {
        ProjectivePlane::new(FieldSpec::for_q(q).unwrap())
    }

    #[test]
    fn counts_for_small_q() {
        for (q, expected) in [(2u64, 21usize), (3, 91)] {
            let pl = plane(q);
            assert_eq!(pl.points().len(), expected);
            assert_eq!(pl.lines().len(), expected);
            let k = (q * q + 1) as usize;
            assert!(pl.lines().iter().all(|l| l.points.len() == k));
            let total: usize = pl.lines().iter().map(|l| l.points.len()).sum();
            assert_eq!(total, expected * k);
        }
    }

    #[test]
    fn first_point_and_ids_are_stable() {
        let pl = plane(2);
        assert_eq!(pl.points()[0], [Elem::ZERO, Elem::ZERO, Elem::ONE]);
        for (i, p) in pl.points().iter().enumerate() {
            assert_eq!(pl.point_index(p), Some(i as u32));
        }
        let f = pl.field();
        let w = Elem(2);
        let scaled = [w, f.mul(w, w), Elem::ONE];
        assert_eq!(pl.point_index(&scaled), pl.point_index(&[Elem::ONE, w, f.mul(w, w)]));
        assert_eq!(pl.point_index(&[Elem::ZERO; 3]), None);
    }

    #[test]
    fn line_z_equals_zero_at_q3() {
        let pl = plane(3);
        let p100 = pl.point_index(&[Elem::ONE, Elem::ZERO, Elem::ZERO]).unwrap();
        let p010 = pl.point_index(&[Elem::ZERO, Elem::ONE, Elem::ZERO]).unwrap();
        let l = pl.join(p100, p010).unwrap();
        assert_eq!(pl.lines()[l as usize].coords, [Elem::ZERO, Elem::ZERO, Elem::ONE]);
        let on: Vec<u32> = pl.lines()[l as usize].points.clone();
        assert_eq!(on.len(), 10);
        for id in on {
            assert!(pl.points()[id as usize][2].is_zero());
        }
        let with_z0 = pl.points().iter().filter(|p| p[2].is_zero()).count();
        assert_eq!(with_z0, 10);
    }

    #[test]
    fn projective_plane_axioms_exhaustive() {
        for q in [2u64, 3] {
            let pl = plane(q);
            let n = pl.points().len() as u32;
            let mut lines_per_point = vec![0usize; n as usize];
            for (li, l) in pl.lines().iter().enumerate() {
                for &p in &l.points {
                    lines_per_point[p as usize] += 1;
                    assert!(pl.incident(p, li as u32));
                }
            }
            assert!(lines_per_point.iter().all(|&c| c as u64 == q * q + 1));
            for a in 0..n {
                for b in a + 1..n {
                    let common: Vec<usize> = (0..n as usize)
                        .filter(|&l| {
                            let pts = &pl.lines()[l].points;
                            pts.binary_search(&a).is_ok() && pts.binary_search(&b).is_ok()
                        })
                        .collect();
                    assert_eq!(common, vec![pl.join(a, b).unwrap() as usize]);
                    let meet: Vec<u32> = pl.lines()[a as usize]
                        .points
                        .iter()
                        .copied()
                        .filter(|p| pl.lines()[b as usize].points.binary_search(p).is_ok())
                        .collect();
                    assert_eq!(meet, vec![pl.meet(a, b).unwrap()]);
                }
            }
        }
    }

    #[test]
    fn hermitian_form_examples() {
        let pl = plane(2);
        let f = pl.field();
        let e1 = [Elem::ONE, Elem::ZERO, Elem::ZERO];
        assert_eq!(hermitian_form(f, &e1, &e1), Elem::ONE);
        let v = [Elem::ZERO, Elem::ONE, Elem(2)];
        assert_eq!(hermitian_form(f, &v, &v), Elem::ZERO);
    }

    #[test]
    fn dump_format() {
        let pl = plane(2);
        let d = pl.dump();
        let mut lines = d.lines();
        assert_eq!(lines.next(), Some("point 0 0 0 1"));
        assert!(d.contains("\nline 0 0 0 1 : 1 5 9 13 17\n"));
        assert_eq!(d.lines().count(), 42);
    }
}
