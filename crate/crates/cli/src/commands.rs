use std::collections::BTreeSet;

use kil_core::applications::{
    bilinear_value_set, distance_census, energy_bilinear, energy_distance, in_semi_isotropic_plane,
    null_census, product_sum_set, BilinearForm, DistanceEnergy,
};
use kil_core::complexes::{
    convert_lines, count_line_intersections, default_draws, family_is_disjoint, line_union_cover,
    random_g_lines, reduce_incidence, select_lines, sl2_chart, ComplexCovector, ThreeQuadricG,
};
use kil_core::constructions::{
    coprime_grid, cubic_surface_points, random_arrangement, semi_isotropic_grid, Affine2, Affine3,
    ArrangementMode, Cubic,
};
use kil_core::ffield::next_prime;
use kil_core::incidence::{
    binomial, bound_check, count_incidences, fit_vanishing_polynomial, minimal_degree, Arrangement,
};
use kil_core::klein::{klein_form, klein_map, klein_preimage, reciprocal_product};
use kil_core::projspace::{
    enumerate, enumerate_lines, enumerate_points, line_count, max_collinear_points,
    projective_count, unrank_point, LineP3, LineRelation, Point3, ProjPoint, SpaceKind,
};
use kil_core::{Budget, Error, PrimeField, Result};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use crate::output::{Artifact, Row};
use crate::{Command, Opts};

pub fn run(command: &Command, o: &mut Opts, budget: &Budget) -> Result<Artifact> {
    if matches!(
        command,
        Command::KleinCheck
            | Command::Convert
            | Command::Sl2Cover
            | Command::Sumprod
            | Command::Tightness
            | Command::VanishingPoly
    ) {
        no_construction(o)?;
    }
    match command {
        Command::Enumerate => enumerate_cmd(o, budget),
        Command::KleinCheck => klein_check(o, budget),
        Command::Incidence => incidence(o, budget),
        Command::Reduce => reduce(o, budget),
        Command::Convert => convert(o),
        Command::Sl2Cover => sl2_cover(o, budget),
        Command::Bilinear => bilinear(o, budget),
        Command::Sumprod => sumprod(o, budget),
        Command::Distances => distances(o, budget),
        Command::Tightness => tightness(o, budget),
        Command::VanishingPoly => vanishing_poly(o),
        Command::Cubic => cubic(o, budget),
        Command::Report { .. } => unreachable!("handled by the dispatcher"),
    }
}

fn field(o: &mut Opts, default_p: u64) -> Result<PrimeField> {
    PrimeField::new(*o.p.get_or_insert(default_p))
}

fn construction<'a>(o: &'a mut Opts, default: &str, allowed: &[&str]) -> Result<&'a str> {
    let c = o.construction.get_or_insert_with(|| default.into());
    if allowed.is_empty() || allowed.contains(&c.as_str()) {
        Ok(c.as_str())
    } else {
        Err(Error::InvalidInput(format!(
            "construction {c:?} is not one of {}",
            allowed.join(", ")
        )))
    }
}

fn no_construction(o: &Opts) -> Result<()> {
    match &o.construction {
        Some(c) => Err(Error::InvalidInput(format!(
            "this subcommand takes no construction, got {c:?}"
        ))),
        None => Ok(()),
    }
}

fn check_budget(budget: &Budget, what: &str, needed: u128) -> Result<()> {
    budget.check(what, needed)
}

fn enumerate_cmd(o: &mut Opts, budget: &Budget) -> Result<Artifact> {
    let f = field(o, 3)?;
    let d = *o.size.get_or_insert(3);
    let kind = match construction(o, "points", &["points", "planes", "lines"])? {
        "points" => SpaceKind::Points,
        "planes" => SpaceKind::Hyperplanes,
        _ => SpaceKind::Lines,
    };
    let items = enumerate(&f, kind, d, budget)?;
    let (expr, expected) = match kind {
        SpaceKind::Lines => ("(p^2+1)(p^2+p+1)", line_count(f.p())),
        _ => ("(p^(d+1)-1)/(p-1)", projective_count(f.p(), d + 1)),
    };
    Ok(Artifact {
        p: f.p(),
        size: format!("d={d}"),
        rows: vec![Row::bounded(
            "count",
            items.len() as u64,
            expr,
            expected as u64,
        )],
        data: Some(serde_json::to_value(&items).expect("integers serialize")),
    })
}

fn klein_check(o: &mut Opts, budget: &Budget) -> Result<Artifact> {
    let f = field(o, 3)?;
    let lines = enumerate_lines(&f, budget)?;
    let l = lines.len() as u64;
    check_budget(budget, "ordered line pairs", (l as u128).pow(2))?;
    let images: Vec<_> = lines.iter().map(|x| klein_map(&f, x)).collect();
    let on_k = images.iter().all(|x| x.on_klein_quadric(&f));
    let inverse = lines
        .iter()
        .zip(&images)
        .all(|(x, y)| klein_preimage(&f, y).is_ok_and(|back| &back == x));
    let injective = images.iter().collect::<BTreeSet<_>>().len() == lines.len();
    let k_points = enumerate_points::<6>(&f, budget)?
        .iter()
        .filter(|q| klein_form(&f, q.coords()) == 0)
        .count() as u64;
    let bijection = on_k && inverse && injective && k_points == l;
    let agree: u64 = (0..lines.len())
        .into_par_iter()
        .map(|i| {
            (0..lines.len())
                .filter(|&j| {
                    let meet = lines[i].relation(&f, &lines[j]) != LineRelation::Skew;
                    meet == (reciprocal_product(&f, &images[i], &images[j]) == 0)
                })
                .count() as u64
        })
        .sum();
    let expected = line_count(f.p()) as u64;
    Ok(Artifact {
        p: f.p(),
        size: format!("lines={l}"),
        rows: vec![
            Row::bounded("lines", l, "(p^2+1)(p^2+p+1)", expected),
            Row::bounded("k_points", k_points, "(p^2+1)(p^2+p+1)", expected),
            Row::plain("bijection", if bijection { "OK" } else { "FAIL" }),
            Row::bounded("meet_agreement", agree, "L^2", l * l),
        ],
        data: None,
    })
}

fn arrangement_mode(o: &mut Opts) -> Result<ArrangementMode> {
    match construction(o, "generic", &["generic", "clustered"])? {
        "generic" => Ok(ArrangementMode::Generic),
        _ => Ok(ArrangementMode::Clustered(*o.k_target.get_or_insert(10))),
    }
}

fn size_label(arr: &Arrangement, k_target: Option<usize>) -> String {
    let k = k_target.map_or("-".to_string(), |k| k.to_string());
    format!("m={} n={} k_target={k}", arr.m(), arr.n())
}

fn incidence(o: &mut Opts, budget: &Budget) -> Result<Artifact> {
    let arr = match &o.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
            let arr = Arrangement::from_json(&text)?;
            match o.p {
                Some(p) if p != arr.field.p() => {
                    return Err(Error::InvalidInput(format!(
                        "--p {p} disagrees with the input's p = {}",
                        arr.field.p()
                    )))
                }
                _ => o.p = Some(arr.field.p()),
            }
            arr
        }
        None => {
            let f = field(o, 101)?;
            let mode = arrangement_mode(o)?;
            let (m, n) = (*o.m.get_or_insert(100), *o.n.get_or_insert(50));
            random_arrangement(&f, m, n, o.seed, mode)?
        }
    };
    check_budget(budget, "incidence count", arr.m() as u128 * arr.n() as u128)?;
    let p = arr.field.p();
    let verdict = bound_check(p, &count_incidences(&arr), true)?;
    let r = &verdict.report;
    Ok(Artifact {
        p,
        size: size_label(&arr, o.k_target),
        rows: vec![
            Row::bounded("I", r.incidences, "m*ceil(sqrt(n))+k*m", r.bound_value),
            Row::plain("k_points", r.k_points),
            Row::plain("k_planes", r.k_planes),
            Row::plain("swapped", verdict.swapped),
            Row::plain("n_at_most_p_squared", verdict.n_at_most_p_squared),
        ],
        data: Some(serde_json::from_str::<Value>(&arr.to_json()).expect("valid json")),
    })
}

fn reduce(o: &mut Opts, budget: &Budget) -> Result<Artifact> {
    let f = field(o, 101)?;
    let mode = arrangement_mode(o)?;
    let (m, n) = (*o.m.get_or_insert(30), *o.n.get_or_insert(30));
    let arr = random_arrangement(&f, m, n, o.seed, mode)?;
    check_budget(budget, "reduction", m as u128 * n as u128 * 64)?;
    let direct = count_incidences(&arr).incidences;
    let red = reduce_incidence(&f, &arr.points, &arr.planes, o.seed, None)?;
    let disjoint = family_is_disjoint(&f, &red.alpha) && family_is_disjoint(&f, &red.beta);
    let covector = red.g.covector().coords();
    Ok(Artifact {
        p: f.p(),
        size: size_label(&arr, o.k_target),
        rows: vec![
            Row::plain("incidences_p3", direct),
            Row::bounded("incidences_g", red.incidences, "incidences_p3", direct),
            Row::plain("families_disjoint", disjoint),
            Row::bounded("draws", red.draws, "10(m^2+n^2+mn)", default_draws(m, n)),
        ],
        data: Some(serde_json::json!({ "covector": covector })),
    })
}

/// The chart `P03 = P12` of the SL2 embedding.
fn sl2_g(f: &PrimeField) -> Result<ThreeQuadricG> {
    let cov = ComplexCovector::from_raw(f, [0, 0, 1, 0, 0, f.p() - 1])?;
    ThreeQuadricG::new(f, cov)
}

fn convert(o: &mut Opts) -> Result<Artifact> {
    let f = field(o, 11)?;
    let n = *o.n.get_or_insert(10);
    let g = sl2_g(&f)?;
    let lines = random_g_lines(&f, &g, n, o.seed)?;
    let carriers: Vec<_> = lines.into_iter().map(|l| l.carrier).collect();
    let conv = convert_lines(&f, &g, &carriers)?;
    let arr = Arrangement::new(f, conv.points, conv.planes)?;
    let incidences = count_incidences(&arr).incidences;
    let meets = count_line_intersections(&f, &carriers);
    Ok(Artifact {
        p: f.p(),
        size: format!("n={n}"),
        rows: vec![
            Row::plain("incidences", incidences),
            Row::bounded(
                "ordered_meeting_pairs",
                meets,
                "I-n",
                incidences.saturating_sub(n as u64),
            ),
        ],
        data: Some(serde_json::from_str::<Value>(&arr.to_json()).expect("valid json")),
    })
}

fn sl2_cover(o: &mut Opts, budget: &Budget) -> Result<Artifact> {
    let f = field(o, 5)?;
    let p = f.p();
    let count = *o.size.get_or_insert((p * p).div_ceil(4) as usize);
    let chart = sl2_chart(&f, budget)?;
    let chosen = select_lines(&chart.lines, count, o.seed)?;
    let cover = line_union_cover(&f, &chosen);
    Ok(Artifact {
        p,
        size: format!("lines={count}"),
        rows: vec![
            Row::bounded(
                "chart_lines",
                chart.lines.len() as u64,
                "(p^2-1)(p+1)",
                (p * p - 1) * (p + 1),
            ),
            Row::bounded("union_size", cover.union_size as u64, "p^3", p.pow(3)),
        ],
        data: None,
    })
}

/// Points of F_p² or F_p³ drawn without replacement.
fn random_affine<const N: usize>(f: &PrimeField, count: usize, seed: u64) -> Result<Vec<[u64; N]>> {
    let p = f.p() as usize;
    let total = p.checked_pow(N as u32).unwrap_or(usize::MAX);
    if count > total {
        return Err(Error::InsufficientSpace(format!(
            "{count} points requested, F_p^{N} has {total}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(index::sample(&mut rng, total, count)
        .into_iter()
        .map(|mut i| {
            let mut x = [0u64; N];
            for c in x.iter_mut().rev() {
                *c = (i % p) as u64;
                i /= p;
            }
            x
        })
        .collect())
}

fn bilinear(o: &mut Opts, budget: &Budget) -> Result<Artifact> {
    let f = field(o, 1009)?;
    let size = *o.size.get_or_insert(8);
    let s: Vec<Affine2> = match construction(o, "coprime", &["coprime", "grid", "random"])? {
        "coprime" => coprime_grid(size as u64, f.p())?,
        "grid" => {
            let side = size as u64;
            if side >= f.p() {
                return Err(Error::InvalidInput(format!(
                    "grid side {side} must be below p"
                )));
            }
            (1..=side)
                .flat_map(|a| (1..=side).map(move |b| [a, b]))
                .collect()
        }
        _ => random_affine::<2>(&f, size, o.seed)?,
    };
    let big_n = s.len() as u64;
    check_budget(budget, "bilinear pair scan", (big_n as u128).pow(2) * 2)?;
    let mut rows = vec![Row::plain("points", big_n)];
    for (name, form) in [("dot", BilinearForm::Dot), ("wedge", BilinearForm::Wedge)] {
        let values = bilinear_value_set(&f, &s, form).len() as u64;
        let energy = energy_bilinear(&f, &s, form, true);
        rows.push(Row::plain(&format!("{name}_values"), values));
        rows.push(Row::bounded(
            &format!("{name}_energy"),
            energy,
            "N^3",
            big_n.pow(3),
        ));
    }
    Ok(Artifact {
        p: f.p(),
        size: format!("N={big_n}"),
        rows,
        data: None,
    })
}

fn sumprod(o: &mut Opts, budget: &Budget) -> Result<Artifact> {
    let f = field(o, 4001)?;
    let size = *o.size.get_or_insert(16);
    if size as u64 >= f.p() {
        return Err(Error::InvalidInput(format!("size {size} must be below p")));
    }
    check_budget(budget, "product pairs", (size as u128).pow(4))?;
    let a: Vec<u64> = (1..=size as u64).collect();
    let plus = product_sum_set(&f, &a, &a, true).len() as u64;
    let minus = product_sum_set(&f, &a, &a, false).len() as u64;
    let bound = (size as f64).powf(1.5).round() as u64;
    Ok(Artifact {
        p: f.p(),
        size: format!("A={size}"),
        rows: vec![
            Row::bounded("AA+AA", plus, "|A|^(3/2)", bound),
            Row::bounded("AA-AA", minus, "|A|^(3/2)", bound),
        ],
        data: None,
    })
}

fn distances(o: &mut Opts, budget: &Budget) -> Result<Artifact> {
    let f = field(o, 31)?;
    let s: Vec<Affine3> = match construction(o, "random", &["random", "semi-isotropic"])? {
        "random" => {
            let size = *o.size.get_or_insert(f.p() as usize);
            random_affine::<3>(&f, size, o.seed)?
        }
        _ => {
            let k = *o.k_target.get_or_insert(3);
            let l = *o.size.get_or_insert(10);
            semi_isotropic_grid(&f, k as u64, l as u64)?.points
        }
    };
    let big_n = s.len() as u64;
    check_budget(budget, "distance pair scan", (big_n as u128).pow(2) * 4)?;
    let census = distance_census(&f, &s);
    let nulls = null_census(&f, &s, budget)?;
    let e = energy_distance(&f, &s, DistanceEnergy::E);
    let e_star = energy_distance(&f, &s, DistanceEnergy::EStar);
    let root = (big_n as f64).sqrt().ceil() as u64;
    Ok(Artifact {
        p: f.p(),
        size: format!("N={big_n}"),
        rows: vec![
            Row::bounded("distinct_distances", census.values.len() as u64, "N", big_n),
            Row::bounded(
                "max_pinned",
                census.max_pinned() as u64,
                "ceil(sqrt(N))",
                root,
            ),
            Row::bounded("energy", e, "N^3", big_n.pow(3)),
            Row::bounded("energy_star", e_star, "N^3", big_n.pow(3)),
            Row::plain("null_pairs", nulls.null_pairs),
            Row::plain("nontrivial_null_triangles", nulls.nontrivial_triangles),
            Row::plain("semi_isotropic_plane", in_semi_isotropic_plane(&f, &s)),
        ],
        data: None,
    })
}

fn tightness(o: &mut Opts, budget: &Budget) -> Result<Artifact> {
    let n = *o.n.get_or_insert(12) as u64;
    let f = field(o, next_prime(4 * n * n))?;
    let s = coprime_grid(n, f.p())?;
    let big_n = s.len() as u64;
    check_budget(budget, "dot products", (big_n as u128).pow(2))?;
    let e = energy_bilinear(&f, &s, BilinearForm::Dot, true);
    let zero = energy_bilinear(&f, &s, BilinearForm::Dot, false) - e;
    Ok(Artifact {
        p: f.p(),
        size: format!("n={n} N={big_n}"),
        rows: vec![
            Row::bounded("E", e, "N^3", big_n.pow(3)),
            Row::bounded("zero_quadruples", zero, "N^2", big_n.pow(2)),
        ],
        data: None,
    })
}

/// Seeded distinct lines of P³, each through two random points.
fn random_lines(f: &PrimeField, count: usize, seed: u64) -> Result<Vec<LineP3>> {
    if count as u128 > line_count(f.p()) {
        return Err(Error::InsufficientSpace(format!(
            "{count} lines requested, P3 has {}",
            line_count(f.p())
        )));
    }
    let total = projective_count(f.p(), 4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = |rng: &mut ChaCha8Rng| -> Point3 {
        unrank_point::<4>(f, rng.gen_range(0..total)).expect("index in range")
    };
    let mut seen = BTreeSet::new();
    while seen.len() < count {
        let (a, b) = (point(&mut rng), point(&mut rng));
        if let Ok(l) = LineP3::through(f, &a, &b) {
            seen.insert(l);
        }
    }
    Ok(seen.into_iter().collect())
}

fn vanishing_poly(o: &mut Opts) -> Result<Artifact> {
    let f = field(o, 101)?;
    let count = *o.size.get_or_insert(3);
    if count == 0 {
        return Err(Error::InvalidInput("need at least one line".into()));
    }
    let lines = random_lines(&f, count, o.seed)?;
    let d = minimal_degree(count);
    let poly = fit_vanishing_polynomial(&f, &lines, d)?;
    let vanishes = lines
        .iter()
        .all(|l| l.points(&f).iter().all(|q| poly.eval(&f, q.coords()) == 0));
    Ok(Artifact {
        p: f.p(),
        size: format!("lines={count}"),
        rows: vec![
            Row::plain("degree", d),
            Row::plain("monomials", binomial(d as u64 + 3, 3)),
            Row::plain("nonzero_terms", poly.terms.len()),
            Row::plain("vanishes", if vanishes { "OK" } else { "FAIL" }),
        ],
        data: Some(Value::String(poly.to_string())),
    })
}

fn cubic(o: &mut Opts, budget: &Budget) -> Result<Artifact> {
    let f = field(o, 7)?;
    let expr = construction(o, "x^3 + y^3 + z^3 - 1", &[])?.to_string();
    let surface = cubic_surface_points(&f, &Cubic::parse(&expr)?, budget)?;
    let remaining: Vec<Point3> = surface
        .points
        .iter()
        .map(|x| ProjPoint::new(&f, [1, x[0], x[1], x[2]]).expect("nonzero"))
        .collect();
    let collinear = match remaining.len() {
        0 | 1 => remaining.len(),
        _ => max_collinear_points(&f, &remaining)?.k,
    };
    Ok(Artifact {
        p: f.p(),
        size: format!("cubic={expr}"),
        rows: vec![
            Row::plain("affine_points", surface.all_points.len()),
            Row::plain("lines", surface.lines.len()),
            Row::plain("points_off_lines", remaining.len()),
            Row::plain("max_collinear_off_lines", collinear),
        ],
        data: None,
    })
}
