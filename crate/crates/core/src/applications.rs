//! Counters for bilinear value sets, sum-product sets, distances and energies.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::budget::Budget;
use crate::constructions::{dot3, isotropic_directions, Affine2, Affine3};
use crate::error::Result;
use crate::ffield::{PrimeField, Scalar};
use crate::incidence::{Arrangement, Weights};
use crate::linalg;
use crate::projspace::{Plane3, Point3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BilinearForm {
    /// `s1·s1' + s2·s2'`.
    Dot,
    /// `s1·s2' - s2·s1'`.
    Wedge,
}

impl BilinearForm {
    pub fn eval(&self, f: &PrimeField, s: &Affine2, t: &Affine2) -> Scalar {
        match self {
            BilinearForm::Dot => f.add(f.mul(s[0], t[0]), f.mul(s[1], t[1])),
            BilinearForm::Wedge => f.sub(f.mul(s[0], t[1]), f.mul(s[1], t[0])),
        }
    }

    pub fn matrix(&self, f: &PrimeField) -> [[Scalar; 2]; 2] {
        match self {
            BilinearForm::Dot => [[1, 0], [0, 1]],
            BilinearForm::Wedge => [[0, 1], [f.elem(-1), 0]],
        }
    }
}

/// `{ω(s, s') : s, s' ∈ S}`.
pub fn bilinear_value_set(f: &PrimeField, s: &[Affine2], form: BilinearForm) -> BTreeSet<Scalar> {
    s.par_iter()
        .map(|a| {
            s.iter()
                .map(|b| form.eval(f, a, b))
                .collect::<BTreeSet<_>>()
        })
        .reduce(BTreeSet::new, |mut x, y| {
            x.extend(y);
            x
        })
}

fn value_multiplicities(f: &PrimeField, s: &[Affine2], form: BilinearForm) -> HashMap<Scalar, u64> {
    let mut counts = HashMap::new();
    for a in s {
        for b in s {
            *counts.entry(form.eval(f, a, b)).or_insert(0u64) += 1;
        }
    }
    counts
}

/// Quadruples with `ω(s, s') = ω(t, t')`, nonzero if `exclude_zero`, as `Σ n(x)²`.
pub fn energy_bilinear(
    f: &PrimeField,
    s: &[Affine2],
    form: BilinearForm,
    exclude_zero: bool,
) -> u64 {
    value_multiplicities(f, s, form)
        .into_iter()
        .filter(|&(x, _)| !exclude_zero || x != 0)
        .map(|(_, n)| n * n)
        .sum()
}

/// Quadruple scan of the same count.
pub fn energy_bilinear_brute(
    f: &PrimeField,
    s: &[Affine2],
    form: BilinearForm,
    exclude_zero: bool,
    budget: &Budget,
) -> Result<u64> {
    budget.check("bilinear energy quadruple scan", (s.len() as u128).pow(4))?;
    Ok(s.par_iter()
        .map(|a| {
            let mut n = 0u64;
            for b in s {
                let v = form.eval(f, a, b);
                if exclude_zero && v == 0 {
                    continue;
                }
                for c in s {
                    for d in s {
                        if form.eval(f, c, d) == v {
                            n += 1;
                        }
                    }
                }
            }
            n
        })
        .sum())
}

/// `{a·b + a'·b'}` for `plus`, `{a·b - a'·b'}` otherwise.
pub fn product_sum_set(f: &PrimeField, a: &[Scalar], b: &[Scalar], plus: bool) -> BTreeSet<Scalar> {
    let products: BTreeSet<Scalar> = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| f.mul(x, y)))
        .collect();
    let mut out = BTreeSet::new();
    for &u in &products {
        for &v in &products {
            out.insert(if plus { f.add(u, v) } else { f.sub(u, v) });
        }
    }
    out
}

pub fn sq_dist(f: &PrimeField, s: &Affine3, t: &Affine3) -> Scalar {
    let d: Affine3 = std::array::from_fn(|i| f.sub(s[i], t[i]));
    dot3(f, &d, &d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceSet {
    /// `{‖s - t‖² : s, t ∈ S}`, so 0 is always present.
    pub values: BTreeSet<Scalar>,
    /// Distinct values `‖s - t‖²` over `t ≠ s`, per point of `S`.
    pub pinned: Vec<usize>,
}

impl DistanceSet {
    pub fn max_pinned(&self) -> usize {
        self.pinned.iter().copied().max().unwrap_or(0)
    }
}

pub fn distance_census(f: &PrimeField, s: &[Affine3]) -> DistanceSet {
    let rows: Vec<BTreeSet<Scalar>> = s
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            s.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, b)| sq_dist(f, a, b))
                .collect()
        })
        .collect();
    let pinned = rows.iter().map(|r| r.len()).collect();
    let mut values: BTreeSet<Scalar> = rows.into_iter().flatten().collect();
    if !s.is_empty() {
        values.insert(0);
    }
    DistanceSet { values, pinned }
}

/// Whether `S` lies in a plane spanned by an isotropic `e1` and a
/// non-isotropic `e2 ⊥ e1`, up to translation. Such planes are exactly those
/// with an isotropic normal.
pub fn in_semi_isotropic_plane(f: &PrimeField, s: &[Affine3]) -> bool {
    let Some(o) = s.first() else {
        return true;
    };
    let diffs: Vec<Affine3> = s
        .iter()
        .map(|x| std::array::from_fn(|i| f.sub(x[i], o[i])))
        .collect();
    match linalg::rank(f, &diffs, 3) {
        0 => true,
        3 => false,
        _ => {
            // normals of planes containing the span
            let normals = linalg::kernel_arr(f, &diffs);
            isotropic_directions(f).iter().any(|n| {
                let mut rows = normals.clone();
                rows.push(*n.coords());
                linalg::rank(f, &rows, 3) == normals.len()
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NullCensus {
    /// Unordered pairs `{s, t}` with `‖s - t‖² = 0`.
    pub null_pairs: u64,
    /// Unordered all-null triangles whose vertices are not collinear.
    pub nontrivial_triangles: u64,
    pub trivial_triangles: u64,
}

fn collinear(f: &PrimeField, a: &Affine3, b: &Affine3, c: &Affine3) -> bool {
    let u: Affine3 = std::array::from_fn(|i| f.sub(b[i], a[i]));
    let v: Affine3 = std::array::from_fn(|i| f.sub(c[i], a[i]));
    linalg::rank(f, &[u, v], 3) < 2
}

pub fn null_census(f: &PrimeField, s: &[Affine3], budget: &Budget) -> Result<NullCensus> {
    let n = s.len();
    budget.check("null triangle census", (n as u128).pow(3))?;
    let null: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && sq_dist(f, &s[i], &s[j]) == 0)
                .collect()
        })
        .collect();
    let null_pairs = (0..n)
        .map(|i| (i + 1..n).filter(|&j| null[i][j]).count() as u64)
        .sum();
    let (nontrivial, trivial) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = (0u64, 0u64);
            for j in i + 1..n {
                if !null[i][j] {
                    continue;
                }
                for k in j + 1..n {
                    if null[i][k] && null[j][k] {
                        if collinear(f, &s[i], &s[j], &s[k]) {
                            acc.1 += 1;
                        } else {
                            acc.0 += 1;
                        }
                    }
                }
            }
            acc
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(NullCensus {
        null_pairs,
        nontrivial_triangles: nontrivial,
        trivial_triangles: trivial,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceEnergy {
    /// Triples `(s, t, t')` with `‖s - t‖² = ‖s - t'‖² ≠ 0`.
    E,
    /// The same with `‖t - t'‖² ≠ 0`, which also drops `t = t'`.
    EStar,
}

/// Level-set count: per `s`, group the other points by distance.
pub fn energy_distance(f: &PrimeField, s: &[Affine3], variant: DistanceEnergy) -> u64 {
    s.par_iter()
        .map(|a| {
            let mut levels: HashMap<Scalar, Vec<&Affine3>> = HashMap::new();
            for b in s {
                let d = sq_dist(f, a, b);
                if d != 0 {
                    levels.entry(d).or_default().push(b);
                }
            }
            levels
                .values()
                .map(|lv| {
                    let n = lv.len() as u64;
                    match variant {
                        DistanceEnergy::E => n * n,
                        DistanceEnergy::EStar => {
                            let mut k = 0;
                            for x in lv {
                                for y in lv {
                                    if sq_dist(f, x, y) != 0 {
                                        k += 1;
                                    }
                                }
                            }
                            k
                        }
                    }
                })
                .sum::<u64>()
        })
        .sum()
}

pub fn energy_distance_brute(
    f: &PrimeField,
    s: &[Affine3],
    variant: DistanceEnergy,
    budget: &Budget,
) -> Result<u64> {
    budget.check("distance energy triple scan", (s.len() as u128).pow(3))?;
    let mut n = 0;
    for a in s {
        for b in s {
            for c in s {
                let d = sq_dist(f, a, b);
                if d == 0 || d != sq_dist(f, a, c) {
                    continue;
                }
                if variant == DistanceEnergy::EStar && sq_dist(f, b, c) == 0 {
                    continue;
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

/// The weighted point-plane arrangement whose incidences are the quadruples
/// `ω(s, s') = ω(t, t')`: points `(s1 : s2 : t1 : t2)` and planes
/// `(s2' : -s1' : -t2' : t1')` for `(s, t) ∈ S × S`, weighted by how many
/// pairs share a projective class. Pairs with `s = t = 0` are skipped.
pub fn wedge_arrangement(f: &PrimeField, s: &[Affine2]) -> Result<Arrangement> {
    let mut points: HashMap<Point3, u64> = HashMap::new();
    let mut planes: HashMap<Plane3, u64> = HashMap::new();
    for a in s {
        for b in s {
            let Ok(q) = Point3::new(f, [a[0], a[1], b[0], b[1]]) else {
                continue;
            };
            *points.entry(q).or_default() += 1;
            let h = Plane3::new(f, [a[1], f.neg(a[0]), f.neg(b[1]), b[0]])?;
            *planes.entry(h).or_default() += 1;
        }
    }
    let mut points: Vec<(Point3, u64)> = points.into_iter().collect();
    let mut planes: Vec<(Plane3, u64)> = planes.into_iter().collect();
    points.sort_unstable();
    planes.sort_unstable();
    let weights = Weights {
        points: points.iter().map(|x| x.1).collect(),
        planes: planes.iter().map(|x| x.1).collect(),
    };
    Arrangement::with_weights(
        *f,
        points.into_iter().map(|x| x.0).collect(),
        planes.into_iter().map(|x| x.0).collect(),
        Some(weights),
    )
}
