//! Exact point-plane incidence counting in P³(F_p).

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{PrimeField, Scalar};
use crate::linalg;
use crate::projspace::{plane_intersection, LineP3, Plane3, Point3, ProjSubspace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weights {
    pub points: Vec<u64>,
    pub planes: Vec<u64>,
}

/// Points and planes of P³ with optional positive weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    pub field: PrimeField,
    pub points: Vec<Point3>,
    pub planes: Vec<Plane3>,
    pub weights: Option<Weights>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct WeightsJson {
    points: Vec<u64>,
    planes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ArrangementJson {
    p: u64,
    points: Vec<Vec<u64>>,
    planes: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<WeightsJson>,
}

fn has_duplicates<T: std::hash::Hash + Eq>(xs: &[T]) -> bool {
    let mut seen = HashSet::with_capacity(xs.len());
    !xs.iter().all(|x| seen.insert(x))
}

impl Arrangement {
    pub fn new(field: PrimeField, points: Vec<Point3>, planes: Vec<Plane3>) -> Result<Self> {
        Self::with_weights(field, points, planes, None)
    }

    pub fn with_weights(
        field: PrimeField,
        points: Vec<Point3>,
        planes: Vec<Plane3>,
        weights: Option<Weights>,
    ) -> Result<Self> {
        if has_duplicates(&points) {
            return Err(Error::InvalidInput("duplicate point".into()));
        }
        if has_duplicates(&planes) {
            return Err(Error::InvalidInput("duplicate plane".into()));
        }
        if let Some(w) = &weights {
            if w.points.len() != points.len() || w.planes.len() != planes.len() {
                return Err(Error::InvalidInput("weight count mismatch".into()));
            }
            if w.points.iter().chain(&w.planes).any(|&x| x == 0) {
                return Err(Error::InvalidInput("weights must be positive".into()));
            }
        }
        Ok(Arrangement {
            field,
            points,
            planes,
            weights,
        })
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn n(&self) -> usize {
        self.planes.len()
    }

    /// Swaps the roles of points and planes through the standard duality.
    pub fn dual(&self) -> Arrangement {
        Arrangement {
            field: self.field,
            points: self.planes.iter().map(|h| h.dual_point()).collect(),
            planes: self.points.iter().map(Plane3::from_dual_point).collect(),
            weights: self.weights.as_ref().map(|w| Weights {
                points: w.planes.clone(),
                planes: w.points.clone(),
            }),
        }
    }

    /// Coordinates are normalized on read; duplicates after normalization are rejected.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: ArrangementJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let f = PrimeField::new(raw.p)?;
        let points = raw
            .points
            .iter()
            .map(|c| Point3::from_slice(&f, c))
            .collect::<Result<Vec<_>>>()?;
        let planes = raw
            .planes
            .iter()
            .map(|c| Plane3::from_slice(&f, c))
            .collect::<Result<Vec<_>>>()?;
        let weights = raw.weights.map(|w| Weights {
            points: w.points,
            planes: w.planes,
        });
        Self::with_weights(f, points, planes, weights)
    }

    pub fn to_json(&self) -> String {
        let raw = ArrangementJson {
            p: self.field.p(),
            points: self.points.iter().map(|q| q.coords().to_vec()).collect(),
            planes: self.planes.iter().map(|h| h.covector().to_vec()).collect(),
            weights: self.weights.as_ref().map(|w| WeightsJson {
                points: w.points.clone(),
                planes: w.planes.clone(),
            }),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }
}

/// An exact nonnegative fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    /// Zero when the denominator is zero.
    pub fn as_f64(&self) -> f64 {
        if self.den == 0 {
            0.0
        } else {
            self.num as f64 / self.den as f64
        }
    }
}

pub fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// `m·⌈√n⌉ + k·m`.
pub fn bound_value(m: u64, n: u64, k: u64) -> u64 {
    m * ceil_sqrt(n) + k * m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceReport {
    pub incidences: u64,
    pub m: usize,
    pub n: usize,
    pub k_points: usize,
    pub k_planes: usize,
    /// Collinearity of planes over lines outside the forbidden set.
    pub k_star: usize,
    pub bound_value: u64,
    pub ratio: Ratio,
}

impl IncidenceReport {
    fn build(
        incidences: u64,
        m: usize,
        n: usize,
        k_points: usize,
        k_planes: usize,
        k_star: usize,
    ) -> Self {
        let bound = bound_value(m as u64, n as u64, k_planes as u64);
        IncidenceReport {
            incidences,
            m,
            n,
            k_points,
            k_planes,
            k_star,
            bound_value: bound,
            ratio: Ratio {
                num: incidences,
                den: bound,
            },
        }
    }
}

/// Serial O(mn) count, kept as the reference.
pub fn count_brute(arr: &Arrangement) -> u64 {
    let f = &arr.field;
    arr.points
        .iter()
        .map(|q| arr.planes.iter().filter(|h| h.contains(f, q)).count() as u64)
        .sum()
}

/// Enumerates the points of each plane and probes a hash set of `P`.
pub fn count_hashed(arr: &Arrangement) -> u64 {
    let f = &arr.field;
    let set: HashSet<&Point3> = arr.points.iter().collect();
    arr.planes
        .par_iter()
        .map(|h| {
            let mut n = 0u64;
            ProjSubspace::solutions(f, &[*h.covector()]).for_each_point(f, |q| {
                if set.contains(&q) {
                    n += 1;
                }
            });
            n
        })
        .sum()
}

/// Parallel count; per plane it scans `P` or enumerates the plane, whichever is smaller.
pub fn count_fast(arr: &Arrangement) -> u64 {
    let p = arr.field.p();
    let plane_size = (p * p + p + 1) as usize;
    if arr.m() > plane_size {
        count_hashed(arr)
    } else {
        let f = &arr.field;
        arr.planes
            .par_iter()
            .map(|h| arr.points.iter().filter(|q| h.contains(f, q)).count() as u64)
            .sum()
    }
}

/// Solves `k(k-1)/2 = pairs`.
fn k_from_pairs(pairs: usize) -> usize {
    (((1 + 8 * pairs) as f64).sqrt().round() as usize).div_ceil(2)
}

/// Pair counts per line through two of the given points.
fn point_pair_lines(f: &PrimeField, points: &[Point3]) -> HashMap<LineP3, usize> {
    let mut map = HashMap::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let l = LineP3::through(f, &points[i], &points[j]).expect("distinct points");
            *map.entry(l).or_insert(0) += 1;
        }
    }
    map
}

fn plane_pair_lines(f: &PrimeField, planes: &[Plane3]) -> HashMap<LineP3, usize> {
    let mut map = HashMap::new();
    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            let l = plane_intersection(f, &planes[i], &planes[j]).expect("distinct planes");
            *map.entry(l).or_insert(0) += 1;
        }
    }
    map
}

fn max_k(map: &HashMap<LineP3, usize>, total: usize, skip: &HashSet<LineP3>) -> usize {
    let best = map
        .iter()
        .filter(|(l, _)| !skip.contains(l))
        .map(|(_, &c)| c)
        .max();
    match best {
        Some(c) => k_from_pairs(c),
        None => total.min(1),
    }
}

pub fn count_incidences(arr: &Arrangement) -> IncidenceReport {
    count_restricted(arr, &[])
}

fn is_supported(f: &PrimeField, q: &Point3, h: &Plane3, forbidden: &[LineP3]) -> bool {
    forbidden
        .iter()
        .any(|l| l.contains(f, q) && l.lies_in(f, h))
}

/// Counts incidences not supported on a forbidden line; `k_star` ignores
/// forbidden lines.
pub fn count_restricted(arr: &Arrangement, forbidden: &[LineP3]) -> IncidenceReport {
    let f = &arr.field;
    let incidences = if forbidden.is_empty() {
        count_fast(arr)
    } else {
        arr.planes
            .par_iter()
            .map(|h| {
                arr.points
                    .iter()
                    .filter(|q| h.contains(f, q) && !is_supported(f, q, h, forbidden))
                    .count() as u64
            })
            .sum()
    };
    let none = HashSet::new();
    let skip: HashSet<LineP3> = forbidden.iter().copied().collect();
    let plane_lines = plane_pair_lines(f, &arr.planes);
    let k_points = max_k(&point_pair_lines(f, &arr.points), arr.m(), &none);
    let k_planes = max_k(&plane_lines, arr.n(), &none);
    let k_star = max_k(&plane_lines, arr.n(), &skip);
    IncidenceReport::build(incidences, arr.m(), arr.n(), k_points, k_planes, k_star)
}

/// `Σ w(q)·w(π)` over incident pairs; unit weights when none are attached.
pub fn count_weighted(arr: &Arrangement) -> u64 {
    let f = &arr.field;
    let wq = |i: usize| arr.weights.as_ref().map_or(1, |w| w.points[i]);
    let wh = |j: usize| arr.weights.as_ref().map_or(1, |w| w.planes[j]);
    (0..arr.n())
        .into_par_iter()
        .map(|j| {
            let h = &arr.planes[j];
            let s: u64 = (0..arr.m())
                .filter(|&i| h.contains(f, &arr.points[i]))
                .map(wq)
                .sum();
            s * wh(j)
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundVerdict {
    /// The report with `m ≥ n`, dualized if needed.
    pub report: IncidenceReport,
    pub swapped: bool,
    pub n_at_most_p_squared: bool,
}

pub fn bound_check(p: u64, report: &IncidenceReport, allow_swap: bool) -> Result<BoundVerdict> {
    let (report, swapped) = if report.m < report.n {
        if !allow_swap {
            return Err(Error::OrientationError);
        }
        let r = IncidenceReport::build(
            report.incidences,
            report.n,
            report.m,
            report.k_planes,
            report.k_points,
            report.k_points,
        );
        (r, true)
    } else {
        (report.clone(), false)
    };
    Ok(BoundVerdict {
        n_at_most_p_squared: (report.n as u64) <= p * p,
        report,
        swapped,
    })
}

/// Exponent vectors of degree-`d` monomials in four variables, lex order
/// starting from `x0^d`.
pub fn monomials(d: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            for c in (0..=d - a - b).rev() {
                out.push([a, b, c, d - a - b - c]);
            }
        }
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A homogeneous polynomial in `x0..x3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub degree: u32,
    pub terms: Vec<([u32; 4], Scalar)>,
}

impl Polynomial {
    pub fn eval(&self, f: &PrimeField, x: &[Scalar; 4]) -> Scalar {
        self.terms.iter().fold(0, |acc, (e, c)| {
            let m = (0..4).fold(*c, |t, i| f.mul(t, f.pow(x[i], e[i] as u64)));
            f.add(acc, m)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(out, " + ")?;
            }
            write!(out, "{c}")?;
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(out, "*x{v}")?,
                    _ => write!(out, "*x{v}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

/// Smallest `d` with `C(d+3, 3) > (d+1)·lines`.
pub fn minimal_degree(lines: usize) -> u32 {
    (1..)
        .find(|&d: &u32| binomial(d as u64 + 3, 3) > (d as u64 + 1) * lines as u64)
        .unwrap()
}

/// A nonzero degree-`d` form vanishing on every line, from the kernel of the
/// evaluation matrix at the first `d+1` rational points of each line.
pub fn fit_vanishing_polynomial(f: &PrimeField, lines: &[LineP3], d: u32) -> Result<Polynomial> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    if f.p() < d as u64 + 1 {
        return Err(Error::DegreeTooLarge {
            degree: d as usize,
            needed: d as u64 + 1,
        });
    }
    let mons = monomials(d);
    let mut rows = Vec::with_capacity(lines.len() * (d as usize + 1));
    for l in lines {
        for q in l.points(f).into_iter().take(d as usize + 1) {
            let x = q.coords();
            rows.push(
                mons.iter()
                    .map(|e| (0..4).fold(1, |t, i| f.mul(t, f.pow(x[i], e[i] as u64))))
                    .collect::<Vec<_>>(),
            );
        }
    }
    let kernel = linalg::kernel(f, &rows, mons.len());
    let Some(v) = kernel.into_iter().next() else {
        return Err(Error::NoKernel { degree: d as usize });
    };
    let poly = Polynomial {
        degree: d,
        terms: mons.into_iter().zip(v).filter(|&(_, c)| c != 0).collect(),
    };
    for l in lines {
        for q in l.points(f) {
            assert_eq!(
                poly.eval(f, q.coords()),
                0,
                "interpolant does not vanish on a line"
            );
        }
    }
    Ok(poly)
}
