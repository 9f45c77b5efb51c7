//! Explicit point sets and arrangements: coprime grids, cubic surfaces,
//! semi-isotropic grids, the isotropic cone and seeded random arrangements.

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ffield::{PrimeField, Scalar};
use crate::incidence::Arrangement;
use crate::linalg;
use crate::projspace::{
    enumerate_points, projective_count, unrank_point, LineP3, Plane3, Point3, ProjPoint,
};

pub type Affine2 = [Scalar; 2];
pub type Affine3 = [Scalar; 3];

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `{(a, b) : 1 ≤ a, b ≤ n, gcd(a, b) = 1}` in lexicographic order. Requires
/// `p > 4n²` so that integer dot products do not wrap.
pub fn coprime_grid(n: u64, p: u64) -> Result<Vec<Affine2>> {
    let needed = 4 * n * n;
    if p <= needed {
        return Err(Error::ModulusTooSmall { p, needed });
    }
    PrimeField::new(p)?;
    Ok((1..=n)
        .flat_map(|a| (1..=n).map(move |b| [a, b]))
        .filter(|&[a, b]| gcd(a, b) == 1)
        .collect())
}

/// An affine polynomial in `x, y, z` of degree at most 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cubic {
    pub terms: Vec<([u32; 3], i64)>,
}

impl Cubic {
    pub fn fermat() -> Self {
        Cubic {
            terms: vec![
                ([3, 0, 0], 1),
                ([0, 3, 0], 1),
                ([0, 0, 3], 1),
                ([0, 0, 0], -1),
            ],
        }
    }

    /// Parses terms like `x^3 + y^3 + z^3 - 1` or `2*x*y*z + x^2*y - 3`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse cubic '{s}'"));
        let norm = s.replace(' ', "").replace('-', "+-");
        let mut terms = Vec::new();
        for tok in norm.split('+').filter(|t| !t.is_empty()) {
            let (sign, body) = match tok.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, tok),
            };
            let mut coef = sign;
            let mut exp = [0u32; 3];
            for factor in body.split('*') {
                let (base, power) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad())?),
                    None => (factor, 1),
                };
                match base {
                    "x" => exp[0] += power,
                    "y" => exp[1] += power,
                    "z" => exp[2] += power,
                    num => coef *= num.parse::<i64>().map_err(|_| bad())?.pow(power),
                }
            }
            if exp.iter().sum::<u32>() > 3 {
                return Err(bad());
            }
            terms.push((exp, coef));
        }
        if terms.is_empty() {
            return Err(bad());
        }
        Ok(Cubic { terms })
    }

    pub fn eval(&self, f: &PrimeField, x: &Affine3) -> Scalar {
        self.terms.iter().fold(0, |acc, (e, c)| {
            let m = (0..3).fold(f.elem(*c), |t, i| f.mul(t, f.pow(x[i], e[i] as u64)));
            f.add(acc, m)
        })
    }

    /// The degree-3 part evaluated at a direction.
    fn eval_top(&self, f: &PrimeField, d: &Affine3) -> Scalar {
        let top = Cubic {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == 3)
                .cloned()
                .collect(),
        };
        top.eval(f, d)
    }
}

/// `{base + t·dir}` in F_p³; `dir` normalized, `base` zero at `dir`'s lead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineLine {
    pub base: Affine3,
    pub dir: Affine3,
}

impl AffineLine {
    pub fn points(&self, f: &PrimeField) -> impl Iterator<Item = Affine3> + '_ {
        let f = *f;
        f.elements()
            .map(move |t| std::array::from_fn(|j| f.add(self.base[j], f.mul(t, self.dir[j]))))
    }

    pub fn contains(&self, f: &PrimeField, x: &Affine3) -> bool {
        let lead = self.dir.iter().position(|&v| v == 1).unwrap();
        let t = f.sub(x[lead], self.base[lead]);
        (0..3).all(|j| x[j] == f.add(self.base[j], f.mul(t, self.dir[j])))
    }
}

#[derive(Debug, Clone)]
pub struct CubicSurface {
    /// Affine solutions, all of them, in lexicographic order.
    pub all_points: Vec<Affine3>,
    pub lines: Vec<AffineLine>,
    /// Solutions off every contained line.
    pub points: Vec<Affine3>,
}

fn affine_points(f: &PrimeField) -> impl Iterator<Item = Affine3> + '_ {
    let p = f.p();
    (0..p).flat_map(move |a| (0..p).flat_map(move |b| (0..p).map(move |c| [a, b, c])))
}

/// Whether some affine plane lies entirely on the surface.
fn contains_plane(f: &PrimeField, cubic: &Cubic) -> bool {
    let p = f.p();
    let normals: Vec<ProjPoint<3>> = enumerate_points::<3>(f, &Budget::unlimited()).unwrap();
    for nrm in &normals {
        let n = nrm.coords();
        let lead = n.iter().position(|&v| v == 1).unwrap();
        let free: Vec<usize> = (0..3).filter(|&j| j != lead).collect();
        for c in 0..p {
            let on_plane = |s: Scalar, t: Scalar| {
                let mut x = [0; 3];
                x[free[0]] = s;
                x[free[1]] = t;
                x[lead] = f.sub(c, f.add(f.mul(n[free[0]], s), f.mul(n[free[1]], t)));
                x
            };
            let all = (0..p).all(|s| (0..p).all(|t| cubic.eval(f, &on_plane(s, t)) == 0));
            if all {
                return true;
            }
        }
    }
    false
}

/// Affine points of a cubic surface with every contained line detected and removed.
pub fn cubic_surface_points(
    f: &PrimeField,
    cubic: &Cubic,
    budget: &Budget,
) -> Result<CubicSurface> {
    let p = f.p() as u128;
    budget.check("cubic surface scan", p.pow(3) * 8)?;
    if contains_plane(f, cubic) {
        return Err(Error::DegenerateCubic);
    }
    let all_points: Vec<Affine3> = affine_points(f).filter(|x| cubic.eval(f, x) == 0).collect();
    // a contained line's direction is a zero of the cubic part
    let dirs: Vec<Affine3> = enumerate_points::<3>(f, &Budget::unlimited())?
        .into_iter()
        .map(|d| *d.coords())
        .filter(|d| cubic.eval_top(f, d) == 0)
        .collect();
    let mut lines = Vec::new();
    for dir in &dirs {
        let lead = dir.iter().position(|&v| v == 1).unwrap();
        for x in &all_points {
            if x[lead] != 0 {
                continue;
            }
            let line = AffineLine {
                base: *x,
                dir: *dir,
            };
            if line.points(f).all(|y| cubic.eval(f, &y) == 0) {
                lines.push(line);
            }
        }
    }
    lines.sort_unstable();
    let points = all_points
        .iter()
        .filter(|x| !lines.iter().any(|l| l.contains(f, x)))
        .copied()
        .collect();
    Ok(CubicSurface {
        all_points,
        lines,
        points,
    })
}

/// A vector `e` with `e·e = 0`, from the least `a² + b² = -1`.
pub fn isotropic_vector(f: &PrimeField) -> Affine3 {
    let (a, b) = f.sum_two_squares(f.elem(-1));
    *ProjPoint::new(f, [a, b, 1]).unwrap().coords()
}

pub fn dot3(f: &PrimeField, a: &Affine3, b: &Affine3) -> Scalar {
    f.dot(a, b)
}

#[derive(Debug, Clone)]
pub struct SemiIsotropicGrid {
    pub e1: Affine3,
    pub e2: Affine3,
    /// `i·e2 + j·e1` for `i < k`, `j < l`.
    pub points: Vec<Affine3>,
}

/// `l` points along `e1` on each of `k` parallel lines offset by `0, e2, …, (k-1)·e2`.
pub fn semi_isotropic_grid(f: &PrimeField, k: u64, l: u64) -> Result<SemiIsotropicGrid> {
    if k == 0 || k > l {
        return Err(Error::InvalidInput("need 1 <= k <= l".into()));
    }
    if l > f.p() {
        return Err(Error::InsufficientSpace(format!("l = {l} exceeds p")));
    }
    let e1 = isotropic_vector(f);
    // e1⊥ is a plane whose radical is e1, so any other direction in it is non-isotropic
    let e2: Affine3 = linalg::kernel_arr(f, &[e1])
        .into_iter()
        .find(|v| linalg::rank(f, &[*v, e1], 3) == 2)
        .expect("e1⊥ is two-dimensional");
    debug_assert_ne!(dot3(f, &e2, &e2), 0);
    let mut points = Vec::with_capacity((k * l) as usize);
    for i in 0..k {
        for j in 0..l {
            points.push(std::array::from_fn(|c| {
                f.add(f.mul(i, e2[c]), f.mul(j, e1[c]))
            }));
        }
    }
    Ok(SemiIsotropicGrid { e1, e2, points })
}

/// Projective solutions of `x² + y² + z² = 0`, lexicographic.
pub fn isotropic_directions(f: &PrimeField) -> Vec<ProjPoint<3>> {
    enumerate_points::<3>(f, &Budget::unlimited())
        .unwrap()
        .into_iter()
        .filter(|d| dot3(f, d.coords(), d.coords()) == 0)
        .collect()
}

/// Lines with Plücker coordinates `(ω : λω)` for isotropic `ω`.
pub fn isotropic_regulus(f: &PrimeField, lambda: Scalar) -> Result<Vec<LineP3>> {
    let lambda = f.reduce(lambda);
    if lambda == 0 {
        return Err(Error::InvalidInput("lambda must be nonzero".into()));
    }
    isotropic_directions(f)
        .into_iter()
        .map(|d| {
            let w = *d.coords();
            let v = w.map(|x| f.mul(lambda, x));
            let pl = crate::klein::Pluecker::from_omega_v(f, w, v)?;
            crate::klein::klein_preimage(f, &pl)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrangementMode {
    Generic,
    /// Plants this many planes through one common line.
    Clustered(usize),
}

/// Seeded duplicate-free arrangement in P³(F_p).
pub fn random_arrangement(
    f: &PrimeField,
    m: usize,
    n: usize,
    seed: u64,
    mode: ArrangementMode,
) -> Result<Arrangement> {
    let total = projective_count(f.p(), 4);
    if m as u128 > total || n as u128 > total {
        return Err(Error::InsufficientSpace(format!(
            "P3(F_{}) has {total} points and planes, asked for m={m}, n={n}",
            f.p()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = total as usize;
    let points: Vec<Point3> = index::sample(&mut rng, total, m)
        .into_iter()
        .map(|i| unrank_point::<4>(f, i as u128).unwrap())
        .collect();
    let plane_at = |i: usize| Plane3::from_dual_point(&unrank_point::<4>(f, i as u128).unwrap());
    let planes = match mode {
        ArrangementMode::Generic => index::sample(&mut rng, total, n)
            .into_iter()
            .map(plane_at)
            .collect(),
        ArrangementMode::Clustered(k) => {
            let pencil_size = f.p() as usize + 1;
            if k > n || k > pencil_size || n - k > total - pencil_size {
                return Err(Error::InsufficientSpace(format!(
                    "cannot plant {k} planes through a line with n={n}, p={}",
                    f.p()
                )));
            }
            let ends = index::sample(&mut rng, total, 2);
            let axis = LineP3::through(
                f,
                &unrank_point::<4>(f, ends.index(0) as u128).unwrap(),
                &unrank_point::<4>(f, ends.index(1) as u128).unwrap(),
            )?;
            let pencil = axis.planes(f);
            let mut planes: Vec<Plane3> = index::sample(&mut rng, pencil.len(), k)
                .into_iter()
                .map(|i| pencil[i])
                .collect();
            let mut seen: HashSet<Plane3> = planes.iter().copied().collect();
            while planes.len() < n {
                let h = plane_at(rng.gen_range(0..total));
                if !axis.lies_in(f, &h) && seen.insert(h) {
                    planes.push(h);
                }
            }
            planes
        }
    };
    Arrangement::new(*f, points, planes)
}

/// One row per point, columns `x0, x1, …`.
pub fn point_set_csv<const N: usize>(points: &[[Scalar; N]]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = (0..N).map(|i| format!("x{i}")).collect();
    w.write_record(&header).unwrap();
    for q in points {
        w.write_record(q.iter().map(|c| c.to_string())).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}
