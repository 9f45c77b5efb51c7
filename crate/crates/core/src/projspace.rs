//! Projective spaces P^d(F_p): normalized points and hyperplanes, linear
//! subspaces, lines of P³, exhaustive enumerators and collinearity scans.

use std::collections::HashMap;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ffield::{PrimeField, Scalar};
use crate::linalg;

/// Rescales `v` so its first nonzero entry is 1. Returns false for the zero vector.
pub fn normalize_in_place(f: &PrimeField, v: &mut [Scalar]) -> bool {
    let Some(lead) = v.iter().copied().find(|&x| x != 0) else {
        return false;
    };
    if lead != 1 {
        let inv = f.inv(lead).expect("nonzero");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    true
}

/// A point of P^{N-1}(F_p), stored with its first nonzero coordinate equal to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint<const N: usize>([Scalar; N]);

impl<const N: usize> ProjPoint<N> {
    /// Reduces the coordinates modulo p and normalizes.
    pub fn new(f: &PrimeField, coords: [u64; N]) -> Result<Self> {
        let mut c = coords.map(|x| f.reduce(x));
        if !normalize_in_place(f, &mut c) {
            return Err(Error::ZeroVector);
        }
        Ok(ProjPoint(c))
    }

    pub fn from_i64(f: &PrimeField, coords: [i64; N]) -> Result<Self> {
        Self::new(f, coords.map(|x| f.elem(x)))
    }

    pub fn from_slice(f: &PrimeField, coords: &[u64]) -> Result<Self> {
        let arr: [u64; N] = coords.try_into().map_err(|_| Error::DimensionMismatch {
            expected: N,
            got: coords.len(),
        })?;
        Self::new(f, arr)
    }

    /// Wraps coordinates that are already canonical.
    pub(crate) fn from_normalized(coords: [Scalar; N]) -> Self {
        debug_assert!(coords.iter().find(|&&x| x != 0) == Some(&1));
        ProjPoint(coords)
    }

    #[inline]
    pub fn coords(&self) -> &[Scalar; N] {
        &self.0
    }
}

/// A hyperplane of P^{N-1}(F_p), given by its normalized covector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane<const N: usize>([Scalar; N]);

impl<const N: usize> Hyperplane<N> {
    pub fn new(f: &PrimeField, covector: [u64; N]) -> Result<Self> {
        Ok(Hyperplane(ProjPoint::new(f, covector)?.0))
    }

    pub fn from_i64(f: &PrimeField, covector: [i64; N]) -> Result<Self> {
        Self::new(f, covector.map(|x| f.elem(x)))
    }

    pub fn from_slice(f: &PrimeField, covector: &[u64]) -> Result<Self> {
        Ok(Hyperplane(ProjPoint::<N>::from_slice(f, covector)?.0))
    }

    #[inline]
    pub fn covector(&self) -> &[Scalar; N] {
        &self.0
    }

    /// The same coordinates read as a point of the dual space.
    pub fn dual_point(&self) -> ProjPoint<N> {
        ProjPoint(self.0)
    }

    pub fn from_dual_point(q: &ProjPoint<N>) -> Self {
        Hyperplane(q.0)
    }

    #[inline]
    pub fn contains(&self, f: &PrimeField, q: &ProjPoint<N>) -> bool {
        f.dot(&self.0, &q.0) == 0
    }
}

pub type Point3 = ProjPoint<4>;
pub type Plane3 = Hyperplane<4>;

pub fn incident<const N: usize>(f: &PrimeField, q: &ProjPoint<N>, plane: &Hyperplane<N>) -> bool {
    plane.contains(f, q)
}

/// Incidence for raw coordinate input, checking dimensions.
pub fn incident_raw(f: &PrimeField, point: &[u64], covector: &[u64]) -> Result<bool> {
    if point.len() != covector.len() {
        return Err(Error::DimensionMismatch {
            expected: covector.len(),
            got: point.len(),
        });
    }
    if point.iter().all(|&x| x % f.p() == 0) || covector.iter().all(|&x| x % f.p() == 0) {
        return Err(Error::ZeroVector);
    }
    let a: Vec<u64> = point.iter().map(|&x| f.reduce(x)).collect();
    let b: Vec<u64> = covector.iter().map(|&x| f.reduce(x)).collect();
    Ok(f.dot(&a, &b) == 0)
}

/// A linear subspace of F_p^N (a projective subspace of P^{N-1}), held as a
/// reduced row-echelon basis. Equal subspaces have identical bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjSubspace<const N: usize> {
    basis: Vec<[Scalar; N]>,
}

impl<const N: usize> ProjSubspace<N> {
    pub fn span(f: &PrimeField, vectors: &[[Scalar; N]]) -> Self {
        let mut rows: Vec<[Scalar; N]> = vectors.iter().map(|v| v.map(|x| f.reduce(x))).collect();
        let pivots = linalg::rref(f, &mut rows, N);
        rows.truncate(pivots.len());
        ProjSubspace { basis: rows }
    }

    /// The subspace cut out by the given covectors.
    pub fn solutions(f: &PrimeField, covectors: &[[Scalar; N]]) -> Self {
        Self::span(f, &linalg::kernel_arr(f, covectors))
    }

    pub fn empty() -> Self {
        ProjSubspace { basis: vec![] }
    }

    /// Vector-space dimension; a projective line has `dim() == 2`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[[Scalar; N]] {
        &self.basis
    }

    pub fn contains(&self, f: &PrimeField, v: &[Scalar; N]) -> bool {
        // Eliminate against the echelon basis.
        let mut r = *v;
        for row in &self.basis {
            let pc = row
                .iter()
                .position(|&x| x != 0)
                .expect("basis rows nonzero");
            let c = r[pc];
            if c != 0 {
                for j in pc..N {
                    r[j] = f.sub(r[j], f.mul(c, row[j]));
                }
            }
        }
        r.iter().all(|&x| x == 0)
    }

    pub fn contains_point(&self, f: &PrimeField, q: &ProjPoint<N>) -> bool {
        self.contains(f, q.coords())
    }

    pub fn contains_subspace(&self, f: &PrimeField, other: &ProjSubspace<N>) -> bool {
        other.basis.iter().all(|v| self.contains(f, v))
    }

    /// Covectors cutting out this subspace (a basis of its annihilator).
    pub fn annihilator(&self, f: &PrimeField) -> Vec<[Scalar; N]> {
        linalg::kernel_arr(f, &self.basis)
    }

    pub fn intersect(&self, f: &PrimeField, other: &ProjSubspace<N>) -> ProjSubspace<N> {
        let mut eqs = self.annihilator(f);
        eqs.extend(other.annihilator(f));
        ProjSubspace::solutions(f, &eqs)
    }

    pub fn join(&self, f: &PrimeField, other: &ProjSubspace<N>) -> ProjSubspace<N> {
        let mut rows = self.basis.clone();
        rows.extend_from_slice(&other.basis);
        ProjSubspace::span(f, &rows)
    }

    /// Number of rational projective points, (p^k - 1)/(p - 1).
    pub fn point_count(&self, f: &PrimeField) -> u64 {
        let p = f.p();
        (0..self.dim()).fold(0, |acc, _| acc * p + 1)
    }

    /// Visits every rational point once, normalized, in no particular order.
    pub fn for_each_point(&self, f: &PrimeField, mut visit: impl FnMut(ProjPoint<N>)) {
        for_each_normalized(f.p(), self.dim(), |coef| {
            let mut v = [0; N];
            for (c, row) in coef.iter().zip(&self.basis) {
                if *c != 0 {
                    for j in 0..N {
                        v[j] = f.add(v[j], f.mul(*c, row[j]));
                    }
                }
            }
            // RREF basis and a normalized coefficient vector give a normalized point
            visit(ProjPoint::from_normalized(v));
        });
    }

    /// All rational points, normalized, in lexicographic order.
    pub fn points(&self, f: &PrimeField) -> Vec<ProjPoint<N>> {
        let mut out = Vec::with_capacity(self.point_count(f) as usize);
        self.for_each_point(f, |q| out.push(q));
        out.sort_unstable();
        out
    }
}

/// Calls `visit` on every normalized nonzero vector of length `len` over F_p,
/// in lexicographic order.
pub fn for_each_normalized(p: u64, len: usize, mut visit: impl FnMut(&[Scalar])) {
    let mut v = vec![0; len];
    for lead in (0..len).rev() {
        v.iter_mut().for_each(|x| *x = 0);
        v[lead] = 1;
        'tail: loop {
            visit(&v);
            // base-p increment of the entries after `lead`
            for j in (lead + 1..len).rev() {
                v[j] += 1;
                if v[j] < p {
                    continue 'tail;
                }
                v[j] = 0;
            }
            break;
        }
    }
}

/// Number of points of P^{n-1}(F_p).
pub fn projective_count(p: u64, n: usize) -> u128 {
    (0..n).fold(0u128, |acc, _| acc * p as u128 + 1)
}

/// The `index`-th point of P^{N-1}(F_p) in lexicographic order.
pub fn unrank_point<const N: usize>(f: &PrimeField, mut index: u128) -> Option<ProjPoint<N>> {
    let p = f.p() as u128;
    for lead in (0..N).rev() {
        let block = p.pow((N - 1 - lead) as u32);
        if index < block {
            let mut c = [0; N];
            c[lead] = 1;
            let mut rest = index;
            for j in (lead + 1..N).rev() {
                c[j] = (rest % p) as u64;
                rest /= p;
            }
            return Some(ProjPoint::from_normalized(c));
        }
        index -= block;
    }
    None
}

/// A line of P³, stored as the reduced row-echelon 2×4 basis of its 2-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineP3 {
    rows: [[Scalar; 4]; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineRelation {
    Equal,
    MeetAt(Point3),
    Skew,
}

impl LineP3 {
    pub fn through(f: &PrimeField, q: &Point3, u: &Point3) -> Result<Self> {
        Self::from_rows(f, [*q.coords(), *u.coords()]).ok_or(Error::IdenticalPoints)
    }

    /// Canonical line spanned by two vectors, or `None` if they are dependent.
    pub fn from_rows(f: &PrimeField, rows: [[Scalar; 4]; 2]) -> Option<Self> {
        let mut rows = rows;
        let pivots = linalg::rref(f, &mut rows, 4);
        (pivots.len() == 2).then_some(LineP3 { rows })
    }

    pub fn from_subspace(sub: &ProjSubspace<4>) -> Option<Self> {
        (sub.dim() == 2).then(|| LineP3 {
            rows: [sub.basis()[0], sub.basis()[1]],
        })
    }

    pub fn rows(&self) -> &[[Scalar; 4]; 2] {
        &self.rows
    }

    pub fn subspace(&self) -> ProjSubspace<4> {
        ProjSubspace {
            basis: self.rows.to_vec(),
        }
    }

    /// The two basis points, each normalized (the first row is already).
    pub fn basis_points(&self) -> (Point3, Point3) {
        (
            ProjPoint::from_normalized(self.rows[0]),
            ProjPoint::from_normalized(self.rows[1]),
        )
    }

    pub fn contains(&self, f: &PrimeField, q: &Point3) -> bool {
        let c = q.coords();
        let p0 = self.rows[0].iter().position(|&x| x != 0).unwrap();
        let p1 = self.rows[1].iter().position(|&x| x != 0).unwrap();
        (0..4).all(|j| {
            let v = f.add(f.mul(c[p0], self.rows[0][j]), f.mul(c[p1], self.rows[1][j]));
            v == c[j]
        })
    }

    pub fn lies_in(&self, f: &PrimeField, plane: &Plane3) -> bool {
        self.rows.iter().all(|r| f.dot(r, plane.covector()) == 0)
    }

    /// The p+1 rational points, in lexicographic order.
    pub fn points(&self, f: &PrimeField) -> Vec<Point3> {
        self.subspace().points(f)
    }

    /// The p+1 planes containing the line.
    pub fn planes(&self, f: &PrimeField) -> Vec<Plane3> {
        self.dual_line(f)
            .points(f)
            .iter()
            .map(Hyperplane::from_dual_point)
            .collect()
    }

    /// The line of the dual space formed by the planes through this line.
    pub fn dual_line(&self, f: &PrimeField) -> LineP3 {
        let ann = self.subspace().annihilator(f);
        LineP3::from_rows(f, [ann[0], ann[1]]).expect("annihilator of a line is 2-dimensional")
    }

    pub fn relation(&self, f: &PrimeField, other: &LineP3) -> LineRelation {
        let meet = self.subspace().intersect(f, &other.subspace());
        match meet.dim() {
            2 => LineRelation::Equal,
            1 => LineRelation::MeetAt(ProjPoint::from_normalized(meet.basis()[0])),
            _ => LineRelation::Skew,
        }
    }
}

pub fn line_from_points(f: &PrimeField, q: &Point3, u: &Point3) -> Result<LineP3> {
    LineP3::through(f, q, u)
}

pub fn line_line_relation(f: &PrimeField, l: &LineP3, m: &LineP3) -> LineRelation {
    l.relation(f, m)
}

/// The common line of two distinct planes.
pub fn plane_intersection(f: &PrimeField, a: &Plane3, b: &Plane3) -> Option<LineP3> {
    let sub = ProjSubspace::solutions(f, &[*a.covector(), *b.covector()]);
    LineP3::from_subspace(&sub)
}

/// Plane through a line and a point off it.
pub fn plane_through(f: &PrimeField, l: &LineP3, q: &Point3) -> Option<Plane3> {
    let sub = ProjSubspace::span(f, &[l.rows[0], l.rows[1], *q.coords()]);
    if sub.dim() != 3 {
        return None;
    }
    let ann = sub.annihilator(f);
    Some(Hyperplane(ProjPoint::<4>::new(f, ann[0]).ok()?.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SpaceKind {
    Points,
    Hyperplanes,
    Lines,
}

pub fn enumerate_points<const N: usize>(
    f: &PrimeField,
    budget: &Budget,
) -> Result<Vec<ProjPoint<N>>> {
    budget.check("point enumeration", projective_count(f.p(), N))?;
    let mut out = Vec::with_capacity(projective_count(f.p(), N) as usize);
    for_each_normalized(f.p(), N, |v| {
        out.push(ProjPoint::from_normalized(v.try_into().unwrap()))
    });
    Ok(out)
}

pub fn enumerate_hyperplanes<const N: usize>(
    f: &PrimeField,
    budget: &Budget,
) -> Result<Vec<Hyperplane<N>>> {
    Ok(enumerate_points::<N>(f, budget)?
        .iter()
        .map(Hyperplane::from_dual_point)
        .collect())
}

/// Number of lines of P³(F_p), (p²+1)(p²+p+1).
pub fn line_count(p: u64) -> u128 {
    let p = p as u128;
    (p * p + 1) * (p * p + p + 1)
}

/// All lines of P³(F_p), in lexicographic order of canonical bases.
pub fn enumerate_lines(f: &PrimeField, budget: &Budget) -> Result<Vec<LineP3>> {
    let p = f.p();
    budget.check("line enumeration", line_count(p))?;
    let mut out = Vec::with_capacity(line_count(p) as usize);
    for i in 0..4 {
        for j in i + 1..4 {
            // row0: 1 at i, 0 at j, free at columns > i except j
            // row1: 1 at j, free at columns > j
            let free0: Vec<usize> = (i + 1..4).filter(|&c| c != j).collect();
            let free1: Vec<usize> = (j + 1..4).collect();
            let nfree = free0.len() + free1.len();
            let total = p.pow(nfree as u32);
            for mut idx in 0..total {
                let mut rows = [[0; 4]; 2];
                rows[0][i] = 1;
                rows[1][j] = 1;
                for &c in &free0 {
                    rows[0][c] = idx % p;
                    idx /= p;
                }
                for &c in &free1 {
                    rows[1][c] = idx % p;
                    idx /= p;
                }
                out.push(LineP3 { rows });
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Runtime-dimension enumeration used by the CLI: returns raw coordinate rows.
pub fn enumerate(
    f: &PrimeField,
    space: SpaceKind,
    d: usize,
    budget: &Budget,
) -> Result<Vec<Vec<Scalar>>> {
    fn pts<const N: usize>(f: &PrimeField, b: &Budget) -> Result<Vec<Vec<Scalar>>> {
        Ok(enumerate_points::<N>(f, b)?
            .iter()
            .map(|q| q.coords().to_vec())
            .collect())
    }
    match space {
        SpaceKind::Points | SpaceKind::Hyperplanes => match d {
            1 => pts::<2>(f, budget),
            2 => pts::<3>(f, budget),
            3 => pts::<4>(f, budget),
            4 => pts::<5>(f, budget),
            5 => pts::<6>(f, budget),
            _ => Err(Error::InvalidInput(format!("dimension {d} not in 1..=5"))),
        },
        SpaceKind::Lines => {
            if d != 3 {
                return Err(Error::InvalidInput(
                    "line enumeration is for P^3 only".into(),
                ));
            }
            Ok(enumerate_lines(f, budget)?
                .iter()
                .map(|l| l.rows.iter().flatten().copied().collect())
                .collect())
        }
    }
}

/// Result of a collinearity scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Collinearity {
    pub k: usize,
    pub witness: LineP3,
}

/// Largest number of the given points on one line. Duplicates count once.
pub fn max_collinear_points(f: &PrimeField, points: &[Point3]) -> Result<Collinearity> {
    let mut pts: Vec<Point3> = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 2 {
        return Err(Error::TooFewObjects(pts.len()));
    }
    let mut pairs: HashMap<LineP3, usize> = HashMap::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let l = LineP3::through(f, &pts[i], &pts[j]).expect("distinct points");
            *pairs.entry(l).or_default() += 1;
        }
    }
    let (witness, max_pairs) = pairs
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .expect("at least one pair");
    // k(k-1)/2 = max_pairs
    let k = (((1 + 8 * max_pairs) as f64).sqrt() as usize).div_ceil(2);
    debug_assert_eq!(k * (k - 1) / 2, max_pairs);
    Ok(Collinearity { k, witness })
}

/// Largest number of the given planes through one common line; the witness
/// is that line in P³.
pub fn max_collinear_planes(f: &PrimeField, planes: &[Plane3]) -> Result<Collinearity> {
    let duals: Vec<Point3> = planes.iter().map(|h| h.dual_point()).collect();
    let c = max_collinear_points(f, &duals)?;
    Ok(Collinearity {
        k: c.k,
        witness: c.witness.dual_line(f),
    })
}
