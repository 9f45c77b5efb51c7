//! Linear line complexes and the three-quadric G = K ∩ S.
//!
//! A hyperplane S of P⁵ is given by a covector `U = (u : w)` acting as
//! `u·ω + w·v`. It is tangent to K (a singular complex) iff `u·w = 0`.
//! For regular S every α- and β-plane of K cuts G in a projective line,
//! which turns point-plane incidences in P³ into line-line incidences in G.

use std::collections::BTreeSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ffield::{PrimeField, Scalar};
use crate::klein::{self, alpha_plane, beta_plane, klein_form, klein_map, pencil, Pluecker, Vec6};
use crate::projspace::{
    plane_intersection, plane_through, projective_count, unrank_point, Hyperplane, LineP3,
    LineRelation, Plane3, Point3, ProjPoint, ProjSubspace,
};

/// Covector `(u : w)` of a hyperplane of P⁵.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexCovector(Hyperplane<6>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexKind {
    Regular,
    /// Tangent to K at this point: the lines meeting its pre-image.
    Singular(Pluecker),
}

impl ComplexCovector {
    pub fn new(f: &PrimeField, u: [Scalar; 3], w: [Scalar; 3]) -> Result<Self> {
        Ok(ComplexCovector(Hyperplane::new(
            f,
            [u[0], u[1], u[2], w[0], w[1], w[2]],
        )?))
    }

    pub fn from_raw(f: &PrimeField, c: Vec6) -> Result<Self> {
        Ok(ComplexCovector(Hyperplane::new(f, c)?))
    }

    pub fn coords(&self) -> &Vec6 {
        self.0.covector()
    }

    pub fn u(&self) -> [Scalar; 3] {
        let c = self.coords();
        [c[0], c[1], c[2]]
    }

    pub fn w(&self) -> [Scalar; 3] {
        let c = self.coords();
        [c[3], c[4], c[5]]
    }

    pub fn u_dot_w(&self, f: &PrimeField) -> Scalar {
        f.dot(&self.u(), &self.w())
    }

    #[inline]
    pub fn eval(&self, f: &PrimeField, x: &Vec6) -> Scalar {
        f.dot(self.coords(), x)
    }

    /// The hyperplane S as a subspace of P⁵.
    pub fn hyperplane(&self, f: &PrimeField) -> ProjSubspace<6> {
        ProjSubspace::solutions(f, &[*self.coords()])
    }
}

pub fn classify_complex(f: &PrimeField, u: &ComplexCovector) -> ComplexKind {
    if u.u_dot_w(f) != 0 {
        ComplexKind::Regular
    } else {
        // reciprocal(L, ·) = U·(·) for L = (w : u)
        let w = u.w();
        let uu = u.u();
        ComplexKind::Singular(Pluecker::from_omega_v(f, w, uu).expect("nonzero covector"))
    }
}

/// G = K ∩ S for a regular hyperplane S.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThreeQuadricG {
    covector: ComplexCovector,
}

impl ThreeQuadricG {
    pub fn new(f: &PrimeField, covector: ComplexCovector) -> Result<Self> {
        match classify_complex(f, &covector) {
            ComplexKind::Regular => Ok(ThreeQuadricG { covector }),
            ComplexKind::Singular(_) => Err(Error::SingularComplex),
        }
    }

    pub fn covector(&self) -> &ComplexCovector {
        &self.covector
    }

    pub fn contains(&self, f: &PrimeField, x: &Vec6) -> bool {
        klein_form(f, x) == 0 && self.covector.eval(f, x) == 0
    }

    pub fn contains_line(&self, f: &PrimeField, line: &ProjSubspace<6>) -> bool {
        klein::subspace_in_klein(f, line)
            && line.basis().iter().all(|x| self.covector.eval(f, x) == 0)
    }

    /// S is identified with P⁴ by dropping the coordinate at the covector's
    /// leading position; it is recovered from `U·x = 0`.
    fn dropped(&self) -> usize {
        self.covector.coords().iter().position(|&x| x != 0).unwrap()
    }

    pub fn to_p4(&self, f: &PrimeField, x: &Vec6) -> [Scalar; 5] {
        debug_assert_eq!(self.covector.eval(f, x), 0);
        let d = self.dropped();
        std::array::from_fn(|k| x[k + (k >= d) as usize])
    }

    pub fn from_p4(&self, f: &PrimeField, y: &[Scalar; 5]) -> Vec6 {
        let d = self.dropped();
        let u = self.covector.coords();
        let mut x: Vec6 = std::array::from_fn(|j| match j.cmp(&d) {
            std::cmp::Ordering::Less => y[j],
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => y[j - 1],
        });
        // u_d = 1 after normalization
        let rest = f.dot(u, &x);
        x[d] = f.neg(rest);
        x
    }

    pub fn subspace_to_p4(&self, f: &PrimeField, s: &ProjSubspace<6>) -> ProjSubspace<5> {
        let rows: Vec<[Scalar; 5]> = s.basis().iter().map(|x| self.to_p4(f, x)).collect();
        ProjSubspace::span(f, &rows)
    }

    /// Number of rational points of G: (p+1)(p²+1).
    pub fn point_count(p: u64) -> u64 {
        (p + 1) * (p * p + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GLineTag {
    Alpha(Point3),
    Beta(Plane3),
}

/// A projective line of P⁵ inside G, with the point or plane it came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GLine {
    pub carrier: ProjSubspace<6>,
    pub tag: GLineTag,
}

impl GLine {
    pub fn meets(&self, f: &PrimeField, other: &GLine) -> bool {
        !self.carrier.intersect(f, &other.carrier).is_empty()
    }
}

/// α(q) ∩ S.
pub fn restrict_point(f: &PrimeField, g: &ThreeQuadricG, q: &Point3) -> GLine {
    let s = g.covector.hyperplane(f);
    GLine {
        carrier: alpha_plane(f, q).span.intersect(f, &s),
        tag: GLineTag::Alpha(*q),
    }
}

/// β(π) ∩ S.
pub fn restrict_plane(f: &PrimeField, g: &ThreeQuadricG, plane: &Plane3) -> GLine {
    let s = g.covector.hyperplane(f);
    GLine {
        carrier: beta_plane(f, plane).span.intersect(f, &s),
        tag: GLineTag::Beta(*plane),
    }
}

/// Outcome of the point-plane → line-line reduction.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub g: ThreeQuadricG,
    pub alpha: Vec<GLine>,
    pub beta: Vec<GLine>,
    /// Number of (α, β) carrier pairs sharing a rational point.
    pub incidences: u64,
    /// Covectors drawn before an admissible one was found.
    pub draws: u64,
}

/// The linear constraints a covector must avoid for a given arrangement.
#[derive(Debug, Clone, Default)]
pub struct ReductionConstraints {
    /// Points of K where two planes of the same type meet; S must miss them.
    pub meet_points: Vec<Vec6>,
    /// Pencil lines of incident pairs; S must not contain them.
    pub pencils: Vec<[Vec6; 2]>,
}

impl ReductionConstraints {
    pub fn new(f: &PrimeField, points: &[Point3], planes: &[Plane3]) -> Result<Self> {
        let mut c = ReductionConstraints::default();
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let l = LineP3::through(f, &points[i], &points[j])
                    .map_err(|_| Error::InvalidInput("duplicate point".into()))?;
                c.meet_points.push(*klein_map(f, &l).coords());
            }
        }
        for i in 0..planes.len() {
            for j in i + 1..planes.len() {
                let l = plane_intersection(f, &planes[i], &planes[j])
                    .ok_or_else(|| Error::InvalidInput("duplicate plane".into()))?;
                c.meet_points.push(*klein_map(f, &l).coords());
            }
        }
        for q in points {
            for h in planes {
                if let Some(pen) = pencil(f, q, h) {
                    c.pencils.push([pen.basis()[0], pen.basis()[1]]);
                }
            }
        }
        Ok(c)
    }

    pub fn admits(&self, f: &PrimeField, u: &ComplexCovector) -> bool {
        u.u_dot_w(f) != 0
            && self.meet_points.iter().all(|x| u.eval(f, x) != 0)
            && self
                .pencils
                .iter()
                .all(|[a, b]| u.eval(f, a) != 0 || u.eval(f, b) != 0)
    }
}

/// Default number of covector draws: 10·(m² + n² + mn), at least 10.
pub fn default_draws(m: usize, n: usize) -> u64 {
    let (m, n) = (m as u64, n as u64);
    (10 * (m * m + n * n + m * n)).max(10)
}

pub fn random_covector(f: &PrimeField, rng: &mut impl Rng) -> ComplexCovector {
    loop {
        let c: Vec6 = std::array::from_fn(|_| rng.gen_range(0..f.p()));
        if let Ok(u) = ComplexCovector::from_raw(f, c) {
            return u;
        }
    }
}

/// Finds a regular S by seeded rejection sampling such that same-type lines
/// stay disjoint and cross-type lines meet exactly for incident pairs.
pub fn reduce_incidence(
    f: &PrimeField,
    points: &[Point3],
    planes: &[Plane3],
    seed: u64,
    max_draws: Option<u64>,
) -> Result<Reduction> {
    let constraints = ReductionConstraints::new(f, points, planes)?;
    let max_draws = max_draws.unwrap_or_else(|| default_draws(points.len(), planes.len()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 1..=max_draws {
        let u = random_covector(f, &mut rng);
        if !constraints.admits(f, &u) {
            continue;
        }
        let g = ThreeQuadricG::new(f, u)?;
        let alpha: Vec<GLine> = points.iter().map(|q| restrict_point(f, &g, q)).collect();
        let beta: Vec<GLine> = planes.iter().map(|h| restrict_plane(f, &g, h)).collect();
        let incidences = count_cross_meets(f, &alpha, &beta);
        let red = Reduction {
            g,
            alpha,
            beta,
            incidences,
            draws: draw,
        };
        let expected = points
            .iter()
            .map(|q| planes.iter().filter(|h| h.contains(f, q)).count() as u64)
            .sum::<u64>();
        assert!(
            family_is_disjoint(f, &red.alpha) && family_is_disjoint(f, &red.beta),
            "admissible covector produced meeting same-type lines"
        );
        assert_eq!(red.incidences, expected, "incidence count not preserved");
        return Ok(red);
    }
    Err(Error::SearchExhausted { draws: max_draws })
}

pub fn family_is_disjoint(f: &PrimeField, lines: &[GLine]) -> bool {
    (0..lines.len()).all(|i| (i + 1..lines.len()).all(|j| !lines[i].meets(f, &lines[j])))
}

pub fn count_cross_meets(f: &PrimeField, a: &[GLine], b: &[GLine]) -> u64 {
    a.iter()
        .map(|x| b.iter().filter(|y| x.meets(f, y)).count() as u64)
        .sum()
}

/// Ordered pairs `(i, j)`, `i ≠ j`, of lines sharing a rational point.
pub fn count_line_intersections(f: &PrimeField, lines: &[ProjSubspace<6>]) -> u64 {
    let mut n = 0;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if !lines[i].intersect(f, &lines[j]).is_empty() {
                n += 2;
            }
        }
    }
    n
}

/// The point-plane arrangement of a family of lines in G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conversion {
    pub points: Vec<Point3>,
    pub planes: Vec<Plane3>,
}

/// Each line of G is a plane pencil `(q, π)` of P³; returns those pairs.
pub fn convert_lines(
    f: &PrimeField,
    g: &ThreeQuadricG,
    lines: &[ProjSubspace<6>],
) -> Result<Conversion> {
    let mut points = Vec::with_capacity(lines.len());
    let mut planes = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        if line.dim() < 2 {
            return Err(Error::FewerThanTwoRationalPoints(i));
        }
        if line.dim() > 2 || !g.contains_line(f, line) {
            return Err(Error::NotInG(i));
        }
        let b = line.basis();
        let l1 = klein::preimage_raw(f, &b[0])?;
        let l2 = klein::preimage_raw(f, &b[1])?;
        let LineRelation::MeetAt(q) = l1.relation(f, &l2) else {
            return Err(Error::NotInG(i));
        };
        let other = l2
            .points(f)
            .into_iter()
            .find(|x| !l1.contains(f, x))
            .expect("distinct lines");
        let plane = plane_through(f, &l1, &other).expect("point off the line");
        points.push(q);
        planes.push(plane);
    }
    Ok(Conversion { points, planes })
}

/// `count` distinct α-lines of G from seeded random points of P³. Two thirds
/// of the points are drawn from three random lines of the complex, so the
/// family has many meeting pairs rather than being nearly disjoint.
pub fn random_g_lines(
    f: &PrimeField,
    g: &ThreeQuadricG,
    count: usize,
    seed: u64,
) -> Result<Vec<GLine>> {
    let total = projective_count(f.p(), 4);
    if count as u128 > total {
        return Err(Error::InsufficientSpace(format!(
            "{count} lines requested, G has {total}"
        )));
    }
    let polarity = null_polarity_from(f, g.covector())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_point = |rng: &mut ChaCha8Rng| loop {
        let idx = rng.gen_range(0..total);
        if let Some(q) = unrank_point::<4>(f, idx) {
            return q;
        }
    };
    let mut hubs = Vec::with_capacity(3);
    while hubs.len() < 3 {
        let q = random_point(&mut rng);
        let plane = polarity.plane_of(f, &q);
        let basis = ProjSubspace::<4>::solutions(f, &[*plane.covector()]);
        let raw: [Scalar; 4] = std::array::from_fn(|k| {
            basis
                .basis()
                .iter()
                .fold(0, |acc, b| f.add(acc, f.mul(rng.gen_range(0..f.p()), b[k])))
        });
        if let Ok(u) = ProjPoint::new(f, raw) {
            if let Ok(l) = LineP3::through(f, &q, &u) {
                hubs.push(l.points(f));
            }
        }
    }
    let max_draws = 50 * count as u64 + 100;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    for _ in 0..max_draws {
        if out.len() == count {
            break;
        }
        let pick = rng.gen_range(0..3usize);
        let q = if pick < 2 {
            let hub = &hubs[rng.gen_range(0..hubs.len())];
            hub[rng.gen_range(0..hub.len())]
        } else {
            random_point(&mut rng)
        };
        if seen.insert(q) {
            out.push(restrict_point(f, g, &q));
        }
    }
    if out.len() < count {
        return Err(Error::SearchExhausted { draws: max_draws });
    }
    Ok(out)
}

/// The skew 4×4 matrix of a regular complex; maps a point to its polar plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NullPolarity {
    pub matrix: [[Scalar; 4]; 4],
}

impl NullPolarity {
    pub fn plane_of(&self, f: &PrimeField, q: &Point3) -> Plane3 {
        let c: [Scalar; 4] = std::array::from_fn(|i| f.dot(&self.matrix[i], q.coords()));
        Plane3::new(f, c).expect("nondegenerate matrix")
    }

    /// Every point of the line lies in the polar plane of every other point.
    pub fn is_invariant(&self, f: &PrimeField, l: &LineP3) -> bool {
        let [q, u] = l.rows();
        let aq: [Scalar; 4] = std::array::from_fn(|i| f.dot(&self.matrix[i], q));
        f.dot(u, &aq) == 0
    }
}

/// Upper-triangular entries `(a01, a02, a03, a12, a13, a23) = (u1, u2, u3, w3, -w2, w1)`,
/// so that `Σ a_ij P_ij = U·L` and the Pfaffian equals `u·w`.
pub fn null_polarity_from(f: &PrimeField, u: &ComplexCovector) -> Result<NullPolarity> {
    if u.u_dot_w(f) == 0 {
        return Err(Error::SingularComplex);
    }
    let [u1, u2, u3] = u.u();
    let [w1, w2, w3] = u.w();
    let upper = [
        (0, 1, u1),
        (0, 2, u2),
        (0, 3, u3),
        (1, 2, w3),
        (1, 3, f.neg(w2)),
        (2, 3, w1),
    ];
    let mut a = [[0; 4]; 4];
    for (i, j, v) in upper {
        a[i][j] = v;
        a[j][i] = f.neg(v);
    }
    Ok(NullPolarity { matrix: a })
}

/// Lines of P⁴ projected to P³ from a center point.
#[derive(Debug, Clone)]
pub struct Projection {
    pub center: ProjPoint<5>,
    pub lines: Vec<LineP3>,
}

fn project_vec(c: &ProjPoint<5>, f: &PrimeField, x: &[Scalar; 5]) -> [Scalar; 4] {
    let lead = c.coords().iter().position(|&v| v == 1).unwrap();
    let t = x[lead];
    std::array::from_fn(|k| {
        let j = k + (k >= lead) as usize;
        f.sub(x[j], f.mul(t, c.coords()[j]))
    })
}

/// Projects lines of P⁴ into P³ from a seeded random center avoiding every
/// line, the plane of every meeting pair and the 3-space of every skew pair,
/// so that meet/skew relations and distinctness are preserved.
pub fn project_to_p3(
    f: &PrimeField,
    lines: &[ProjSubspace<5>],
    seed: u64,
    max_draws: Option<u64>,
) -> Result<Projection> {
    let mut avoid: Vec<ProjSubspace<5>> = Vec::new();
    for (i, l) in lines.iter().enumerate() {
        if l.dim() != 2 {
            return Err(Error::InvalidInput(format!("input {i} is not a line")));
        }
        avoid.push(l.clone());
    }
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let span = lines[i].join(f, &lines[j]);
            if span.dim() == 2 {
                return Err(Error::InvalidInput(format!("lines {i} and {j} coincide")));
            }
            avoid.push(span);
        }
    }
    let n = lines.len() as u64;
    let max_draws = max_draws.unwrap_or((10 * n * n).max(100));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_draws {
        let raw: [Scalar; 5] = std::array::from_fn(|_| rng.gen_range(0..f.p()));
        let Ok(c) = ProjPoint::new(f, raw) else {
            continue;
        };
        if avoid.iter().any(|s| s.contains_point(f, &c)) {
            continue;
        }
        let images = lines
            .iter()
            .map(|l| {
                let b = l.basis();
                LineP3::from_rows(f, [project_vec(&c, f, &b[0]), project_vec(&c, f, &b[1])])
                    .expect("center is off every line")
            })
            .collect();
        return Ok(Projection {
            center: c,
            lines: images,
        });
    }
    Err(Error::SearchExhausted { draws: max_draws })
}

/// An affine line `{base + t·dir}` of F_p⁴ lying in SL₂, matrices read as
/// `(a, b, c, d)` for `[[a, b], [c, d]]`. `dir` is normalized and `base` has
/// a zero at `dir`'s leading position, which makes the pair canonical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sl2Line {
    pub base: [Scalar; 4],
    pub dir: [Scalar; 4],
}

impl Sl2Line {
    pub fn new(f: &PrimeField, base: [Scalar; 4], dir: [Scalar; 4]) -> Result<Self> {
        let dir = *ProjPoint::new(f, dir)?.coords();
        let lead = dir.iter().position(|&x| x == 1).unwrap();
        let t = base[lead];
        let base = std::array::from_fn(|j| f.sub(base[j], f.mul(t, dir[j])));
        Ok(Sl2Line { base, dir })
    }

    pub fn points(&self, f: &PrimeField) -> Vec<[Scalar; 4]> {
        f.elements()
            .map(|t| std::array::from_fn(|j| f.add(self.base[j], f.mul(t, self.dir[j]))))
            .collect()
    }

    /// Its projective closure in P⁵, a line of G.
    pub fn carrier(&self, f: &PrimeField) -> ProjSubspace<6> {
        let [ha, hb, hc, hd] = self.dir;
        let dir6 = [ha, hb, 0, f.neg(hd), hc, 0];
        ProjSubspace::span(f, &[sl2_embed_raw(f, &self.base), dir6])
    }
}

fn sl2_embed_raw(f: &PrimeField, m: &[Scalar; 4]) -> Vec6 {
    let [a, b, c, d] = *m;
    [a, b, 1, f.neg(d), c, 1]
}

pub fn sl2_det(f: &PrimeField, m: &[Scalar; 4]) -> Scalar {
    f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]))
}

/// The chart of G cut out by `P03 = P12`, whose affine part `P03 ≠ 0` is SL₂.
#[derive(Debug, Clone)]
pub struct Sl2Chart {
    pub g: ThreeQuadricG,
    /// All affine lines of F_p⁴ contained in SL₂, sorted.
    pub lines: Vec<Sl2Line>,
}

impl Sl2Chart {
    /// `[[a, b], [c, d]] ↦ (ω : v) = (a, b, 1 : -d, c, 1)`; in chart coordinates
    /// `(x1, x2, y1, y2) = (a, b, d, c)` the image satisfies `x1·y1 - x2·y2 = 1`.
    pub fn embed(&self, f: &PrimeField, m: &[Scalar; 4]) -> Result<Pluecker> {
        if sl2_det(f, m) != 1 {
            return Err(Error::InvalidInput("matrix is not in SL2".into()));
        }
        Pluecker::new(f, sl2_embed_raw(f, m))
    }

    pub fn chart_coords(m: &[Scalar; 4]) -> [Scalar; 4] {
        [m[0], m[1], m[3], m[2]]
    }
}

pub fn sl2_elements(f: &PrimeField) -> Vec<[Scalar; 4]> {
    let p = f.p();
    let mut out = Vec::with_capacity((p * (p * p - 1)) as usize);
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let m = [a, b, c, d];
                    if sl2_det(f, &m) == 1 {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

fn mat_mul(f: &PrimeField, x: &[Scalar; 4], y: &[Scalar; 4]) -> [Scalar; 4] {
    let [a, b, c, d] = *x;
    let [e, g, h, k] = *y;
    [
        f.add(f.mul(a, e), f.mul(b, h)),
        f.add(f.mul(a, g), f.mul(b, k)),
        f.add(f.mul(c, e), f.mul(d, h)),
        f.add(f.mul(c, g), f.mul(d, k)),
    ]
}

pub fn sl2_chart(f: &PrimeField, budget: &Budget) -> Result<Sl2Chart> {
    let p = f.p();
    budget.check("SL2 line enumeration", (p as u128).pow(4) * (p as u128 + 1))?;
    let g = ThreeQuadricG::new(
        f,
        ComplexCovector::from_raw(f, [0, 0, 1, 0, 0, f.elem(-1)])?,
    )?;
    // Lines through g are g·(1 + t n) with n nilpotent: n = v wᵀ, v = (x, y), w = (y, -x).
    let mut nilpotents = vec![[0, 1, 0, 0]];
    for x in 0..p {
        nilpotents.push([x, f.neg(f.mul(x, x)), 1, f.neg(x)]);
    }
    let mut lines = BTreeSet::new();
    for m in sl2_elements(f) {
        for n in &nilpotents {
            lines.insert(Sl2Line::new(f, m, mat_mul(f, &m, n))?);
        }
    }
    Ok(Sl2Chart {
        g,
        lines: lines.into_iter().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cover {
    pub union_size: usize,
    /// `union_size / p³`.
    pub fraction: f64,
}

pub fn line_union_cover(f: &PrimeField, lines: &[Sl2Line]) -> Cover {
    let pts: BTreeSet<[Scalar; 4]> = lines.iter().flat_map(|l| l.points(f)).collect();
    let p3 = (f.p() as f64).powi(3);
    Cover {
        union_size: pts.len(),
        fraction: pts.len() as f64 / p3,
    }
}

/// Seeded choice of `count` distinct lines, in sampling order.
pub fn select_lines(lines: &[Sl2Line], count: usize, seed: u64) -> Result<Vec<Sl2Line>> {
    if count > lines.len() {
        return Err(Error::InsufficientSpace(format!(
            "{count} lines requested, {} available",
            lines.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(index::sample(&mut rng, lines.len(), count)
        .into_iter()
        .map(|i| lines[i])
        .collect())
}
