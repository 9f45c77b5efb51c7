//! The Klein correspondence between lines of P³ and points of the Klein
//! quadric K ⊂ P⁵.
//!
//! Plücker coordinates are ordered `(P01, P02, P03, P23, P31, P12)`, so the
//! first half is the direction part `ω` and the second half the moment part
//! `v` of an affine line. K is `P01·P23 + P02·P31 + P03·P12 = 0`, i.e. `ω·v = 0`.

use crate::error::{Error, Result};
use crate::ffield::{PrimeField, Scalar};
use crate::linalg;
use crate::projspace::{LineP3, Plane3, Point3, ProjPoint, ProjSubspace};

pub type Vec6 = [Scalar; 6];

/// A normalized Plücker vector, i.e. a point of P⁵.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pluecker(ProjPoint<6>);

impl Pluecker {
    pub fn new(f: &PrimeField, coords: Vec6) -> Result<Self> {
        Ok(Pluecker(ProjPoint::new(f, coords)?))
    }

    pub fn from_omega_v(f: &PrimeField, omega: [Scalar; 3], v: [Scalar; 3]) -> Result<Self> {
        Self::new(f, [omega[0], omega[1], omega[2], v[0], v[1], v[2]])
    }

    pub fn from_point(q: ProjPoint<6>) -> Self {
        Pluecker(q)
    }

    pub fn coords(&self) -> &Vec6 {
        self.0.coords()
    }

    pub fn point(&self) -> &ProjPoint<6> {
        &self.0
    }

    /// Direction part `(P01, P02, P03)`.
    pub fn omega(&self) -> [Scalar; 3] {
        let c = self.coords();
        [c[0], c[1], c[2]]
    }

    /// Moment part `(P23, P31, P12)`.
    pub fn moment(&self) -> [Scalar; 3] {
        let c = self.coords();
        [c[3], c[4], c[5]]
    }

    pub fn on_klein_quadric(&self, f: &PrimeField) -> bool {
        klein_form(f, self.coords()) == 0
    }
}

/// `P01·P23 + P02·P31 + P03·P12`.
#[inline]
pub fn klein_form(f: &PrimeField, x: &Vec6) -> Scalar {
    f.add(
        f.add(f.mul(x[0], x[3]), f.mul(x[1], x[4])),
        f.mul(x[2], x[5]),
    )
}

/// The covector `Q·x` of the reciprocal product: swaps the two halves.
#[inline]
pub fn polar(x: &Vec6) -> Vec6 {
    [x[3], x[4], x[5], x[0], x[1], x[2]]
}

/// The reciprocal product of two raw 6-vectors.
#[inline]
pub fn reciprocal(f: &PrimeField, a: &Vec6, b: &Vec6) -> Scalar {
    f.dot(&polar(a), b)
}

/// Plücker coordinates `P_ij = q_i u_j - q_j u_i` of two raw vectors.
pub fn pluecker_raw(f: &PrimeField, q: &[Scalar; 4], u: &[Scalar; 4]) -> Vec6 {
    let m = |i: usize, j: usize| f.sub(f.mul(q[i], u[j]), f.mul(q[j], u[i]));
    [m(0, 1), m(0, 2), m(0, 3), m(2, 3), m(3, 1), m(1, 2)]
}

pub fn klein_map(f: &PrimeField, l: &LineP3) -> Pluecker {
    let [q, u] = l.rows();
    Pluecker(ProjPoint::new(f, pluecker_raw(f, q, u)).expect("distinct rows give a nonzero vector"))
}

/// Inverse of [`klein_map`]: the row space of the 4×4 skew matrix `(P_ij)`
/// is the line.
pub fn klein_preimage(f: &PrimeField, l: &Pluecker) -> Result<LineP3> {
    preimage_raw(f, l.coords())
}

pub(crate) fn preimage_raw(f: &PrimeField, x: &Vec6) -> Result<LineP3> {
    if klein_form(f, x) != 0 || x.iter().all(|&c| c == 0) {
        return Err(Error::NotOnKleinQuadric);
    }
    let [p01, p02, p03, p23, p31, p12] = *x;
    let n = |a| f.neg(a);
    let rows = [
        [0, p01, p02, p03],
        [n(p01), 0, p12, n(p31)],
        [n(p02), n(p12), 0, p23],
        [n(p03), p31, n(p23), 0],
    ];
    let sub = ProjSubspace::span(f, &rows);
    LineP3::from_subspace(&sub).ok_or(Error::NotOnKleinQuadric)
}

/// Representative-dependent scalar; only its vanishing is meaningful.
pub fn reciprocal_product(f: &PrimeField, l: &Pluecker, m: &Pluecker) -> Scalar {
    reciprocal(f, l.coords(), m.coords())
}

/// For points of K: true iff the underlying lines meet (or coincide).
pub fn lines_meet(f: &PrimeField, l: &Pluecker, m: &Pluecker) -> bool {
    reciprocal_product(f, l, m) == 0
}

/// The α-plane of a point: Klein images of all lines through it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaPlane {
    pub point: Point3,
    pub span: ProjSubspace<6>,
}

/// The β-plane of a plane: Klein images of all lines inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaPlane {
    pub plane: Plane3,
    pub span: ProjSubspace<6>,
}

pub fn alpha_plane(f: &PrimeField, q: &Point3) -> AlphaPlane {
    let lead = q.coords().iter().position(|&x| x == 1).unwrap();
    let gens: Vec<Vec6> = (0..4)
        .filter(|&j| j != lead)
        .map(|j| {
            let mut e = [0; 4];
            e[j] = 1;
            pluecker_raw(f, q.coords(), &e)
        })
        .collect();
    AlphaPlane {
        point: *q,
        span: ProjSubspace::span(f, &gens),
    }
}

pub fn beta_plane(f: &PrimeField, plane: &Plane3) -> BetaPlane {
    let pts = linalg::kernel_arr(f, &[*plane.covector()]);
    let gens = [
        pluecker_raw(f, &pts[0], &pts[1]),
        pluecker_raw(f, &pts[0], &pts[2]),
        pluecker_raw(f, &pts[1], &pts[2]),
    ];
    BetaPlane {
        plane: *plane,
        span: ProjSubspace::span(f, &gens),
    }
}

/// The plane pencil of lines through `q` inside `plane`, as a projective
/// line of K; `None` when `q` is not on the plane.
pub fn pencil(f: &PrimeField, q: &Point3, plane: &Plane3) -> Option<ProjSubspace<6>> {
    let meet = alpha_plane(f, q)
        .span
        .intersect(f, &beta_plane(f, plane).span);
    (meet.dim() == 2).then_some(meet)
}

/// True iff the projective subspace lies entirely inside K.
pub fn subspace_in_klein(f: &PrimeField, s: &ProjSubspace<6>) -> bool {
    let b = s.basis();
    b.iter().all(|x| klein_form(f, x) == 0)
        && (0..b.len()).all(|i| (i + 1..b.len()).all(|j| reciprocal(f, &b[i], &b[j]) == 0))
}

/// A regulus: the lines meeting three mutually skew lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regulus {
    pub defining: [LineP3; 3],
    /// Klein images of the members, sorted.
    pub members: Vec<Pluecker>,
    /// The projective 2-plane of P⁵ whose section with K is the regulus.
    pub carrier: ProjSubspace<6>,
}

impl Regulus {
    pub fn lines(&self, f: &PrimeField) -> Vec<LineP3> {
        self.members
            .iter()
            .map(|m| klein_preimage(f, m).expect("members lie on K"))
            .collect()
    }

    /// The other ruling of the same quadric surface.
    pub fn reciprocal(&self, f: &PrimeField) -> Result<Regulus> {
        let lines = self.lines(f);
        if lines.len() < 3 {
            return Err(Error::InvalidInput(
                "regulus has fewer than three members".into(),
            ));
        }
        regulus_through(f, &lines[0], &lines[1], &lines[2])
    }
}

pub fn regulus_through(f: &PrimeField, l1: &LineP3, l2: &LineP3, l3: &LineP3) -> Result<Regulus> {
    let defining = [*l1, *l2, *l3];
    let images = defining.map(|l| klein_map(f, &l));
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if lines_meet(f, &images[i], &images[j]) {
            return Err(Error::NotMutuallySkew(i, j));
        }
    }
    let carrier = ProjSubspace::solutions(f, &images.map(|l| polar(l.coords())));
    debug_assert_eq!(carrier.dim(), 3);
    let b = carrier.basis();
    let gram: [[Scalar; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| reciprocal(f, &b[i], &b[j])));
    let rank = linalg::rank(f, &gram, 3);
    if rank < 3 {
        return Err(Error::DegenerateConic {
            rank,
            factors: conic_factors(f, &gram, rank, b),
        });
    }
    let combine = |c: [Scalar; 3]| -> Vec6 {
        std::array::from_fn(|j| (0..3).fold(0, |acc, i| f.add(acc, f.mul(c[i], b[i][j]))))
    };
    let mut members: Vec<Pluecker> = conic_points(f, &gram)
        .into_iter()
        .map(|c| Pluecker::new(f, combine(c)).expect("independent basis"))
        .collect();
    members.sort_unstable();
    Ok(Regulus {
        defining,
        members,
        carrier,
    })
}

/// Rational points of the nondegenerate conic `xᵀ G x = 0` in P², found by
/// solving a quadratic along each line of a pencil of parameters.
fn conic_points(f: &PrimeField, g: &[[Scalar; 3]; 3]) -> Vec<[Scalar; 3]> {
    let two = f.elem(2);
    // A t² + 2 B t + C = 0
    let solve = |a: Scalar, b: Scalar, c: Scalar| -> Vec<Scalar> {
        if a == 0 {
            if b == 0 {
                return vec![];
            }
            return vec![f.neg(f.div(c, f.mul(two, b)).unwrap())];
        }
        let disc = f.sub(f.square(b), f.mul(a, c));
        let inv_a = f.inv(a).unwrap();
        f.sqrt(disc)
            .to_vec()
            .into_iter()
            .map(|r| f.mul(f.sub(r, b), inv_a))
            .collect()
    };
    let mut out = Vec::new();
    // (x : y : 1)
    for y in f.elements() {
        let b = f.add(f.mul(g[0][1], y), g[0][2]);
        let c = f.add(
            f.add(f.mul(g[1][1], f.square(y)), f.mul(two, f.mul(g[1][2], y))),
            g[2][2],
        );
        for x in solve(g[0][0], b, c) {
            out.push([x, y, 1]);
        }
    }
    // (x : 1 : 0)
    for x in solve(g[0][0], g[0][1], g[1][1]) {
        out.push([x, 1, 0]);
    }
    if g[0][0] == 0 {
        out.push([1, 0, 0]);
    }
    out
}

/// Rational line components of a degenerate conic, each as a basis in P⁵.
fn conic_factors(f: &PrimeField, g: &[[Scalar; 3]; 3], rank: usize, b: &[Vec6]) -> Vec<Vec<Vec6>> {
    let lift = |c: &[Scalar]| -> Vec6 {
        std::array::from_fn(|j| (0..3).fold(0, |acc, i| f.add(acc, f.mul(c[i], b[i][j]))))
    };
    let ker = linalg::kernel(f, g, 3);
    match rank {
        0 => vec![],
        1 => vec![ker.iter().map(|v| lift(v)).collect()],
        _ => {
            // Rank 2: a pair of lines through the singular point, rational or conjugate.
            let s: [Scalar; 3] = ker[0].clone().try_into().unwrap();
            let q = |x: &[Scalar; 3]| -> Scalar {
                (0..3).fold(0, |acc, i| {
                    (0..3).fold(acc, |acc, j| f.add(acc, f.mul(x[i], f.mul(g[i][j], x[j]))))
                })
            };
            let mut lines: Vec<ProjSubspace<3>> = Vec::new();
            crate::projspace::for_each_normalized(f.p(), 3, |v| {
                let x: [Scalar; 3] = v.try_into().unwrap();
                if q(&x) == 0 {
                    let line = ProjSubspace::span(f, &[s, x]);
                    if line.dim() == 2 && !lines.contains(&line) {
                        lines.push(line);
                    }
                }
            });
            lines
                .iter()
                .map(|l| l.basis().iter().map(|v| lift(v)).collect())
                .collect()
        }
    }
}
