//! End-to-end acceptance checks. Runs as a plain binary so that every
//! criterion prints exactly one PASS/FAIL line, in order.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use dcover_core::conic_p2::{
    coordinate_tangents, expected_transversal, global_sections, jumping_scan, random_lines,
    restrict_pair, section_coordinates, section_image_degree, splitting_for_pairs,
    splitting_on_line, standard_conic_pair, tangent_lines, two_point_cover_pair,
    two_point_splitting, ConicCover, LineKind,
};
use dcover_core::double_cover::{
    branch_decompose, group_law, k_minus, k_plus, AdmissiblePairRep, ChartDomain,
};
use dcover_core::exact_arith::rational::{rat, ratio};
use dcover_core::exact_arith::{
    rank, DistinguishedOpen, Field, HomPoly3, HomRatio, Mat2, RatFunc, Rational, UniPoly,
};
use dcover_core::p1_bundles::{
    split_p1, trivialize_affine, verify_factorization, verify_trivialization, AffineCocycle,
    P1TransitionData,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sorted(a: i64, b: i64) -> (i64, i64) {
    (a.max(b), a.min(b))
}

fn two_point_table() -> Outcome {
    for n in -11..=11 {
        let got = two_point_splitting(n).map_err(err)?.pair();
        ensure(got == expected_transversal(n), || {
            format!("n = {n}: got {got:?}")
        })?;
    }
    Ok("23 exponents, |n| <= 11".into())
}

fn transversal_lines() -> Outcome {
    let cover = ConicCover::standard();
    for n in 0..=8 {
        for line in random_lines(&cover, 5, 1000 + n as u64).map_err(err)? {
            let got = splitting_on_line(&cover, n, &line).map_err(err)?.pair();
            ensure(got == expected_transversal(n), || {
                format!("n = {n}, line {:?}: got {got:?}", line.form)
            })?;
        }
    }
    Ok("n = 0..8, 5 seeded lines each".into())
}

/// `(K_12^n G0_12)` on the tangent line `x0 + c x1 + b x2 = 0` in the
/// parameter `t = x12`, in closed form.
fn closed_form_tangent_matrix(n: u32, b: &Rational, c: &Rational) -> Mat2<RatFunc> {
    let t = RatFunc::x();
    let k = |q: &Rational| RatFunc::constant(q.clone());
    let btc = &(&k(b) * &t) - &k(c);
    let plus = &(&k(b) * &t).pow(n) + &k(c).pow(n);
    let minus = &(&k(b) * &t).pow(n) - &k(c).pow(n);
    let scale = (&k(&rat(2)).pow(n) * &k(&ratio(1, 2)))
        .div(&(&t * &btc))
        .expect("nonzero");
    Mat2::new(
        &(&t * &btc) * &plus,
        &(&btc * &btc) * &minus,
        &t * &minus,
        &btc * &plus,
    )
    .scale(&scale)
}

fn tangent_lines_jump() -> Outcome {
    let cover = ConicCover::standard();
    let params = [ratio(1, 2), ratio(-1, 2), rat(3)];
    let mut tangents = tangent_lines(&cover, &params).map_err(err)?;
    tangents.extend(coordinate_tangents(&cover).map_err(err)?);
    for l in &tangents {
        ensure(
            cover.classify_line(l).map_err(err)? == LineKind::Tangent,
            || format!("{:?} is not tangent", l.form),
        )?;
    }
    // The restricted transition agrees with the closed form for the
    // parameterized tangent family.
    let pair = standard_conic_pair();
    for (b, line) in params.iter().zip(&tangents) {
        let c = -(rat(4) * b).recip();
        let (r, ids) = restrict_pair(&pair, line).map_err(err)?;
        let (i1, i2) = (
            ids.iter().position(|&i| i == 1).unwrap(),
            ids.iter().position(|&i| i == 2).unwrap(),
        );
        for n in 0..=8u32 {
            let g = group_law(&[&r], &[n as i64]).map_err(err)?.transitions[i1][i2].clone();
            ensure(g == closed_form_tangent_matrix(n, b, &c), || {
                format!("b = {b}, n = {n}: transition differs")
            })?;
        }
    }
    let transversal = random_lines(&cover, 10, 77).map_err(err)?;
    let mut batch = transversal.clone();
    batch.extend(tangents.iter().cloned());
    for n in 0..=8 {
        for l in &tangents {
            let got = splitting_on_line(&cover, n, l).map_err(err)?.pair();
            ensure(got == sorted(n - 1, 0), || {
                format!("n = {n}, tangent {:?}: got {got:?}", l.form)
            })?;
        }
        let rows = jumping_scan(&cover, n, &batch, 4).map_err(err)?;
        for row in &rows {
            let expect = n >= 3 && row.kind == LineKind::Tangent;
            ensure(row.is_jumping == expect, || {
                format!(
                    "n = {n}: jumping flag {} on {:?}",
                    row.is_jumping, row.line.form
                )
            })?;
        }
    }
    Ok("5 tangent lines, n = 0..8, jumping iff n >= 3".into())
}

fn c_vector(k: usize) -> Vec<Rational> {
    (1..=15)
        .map(|i| if i == k { rat(1) } else { rat(0) })
        .collect()
}

fn chart2_poly(terms: &[(Rational, [u32; 2])]) -> HomRatio {
    terms
        .iter()
        .filter(|(c, _)| c != &rat(0))
        .fold(HomRatio::zero(), |acc, (c, e)| {
            let m = HomRatio::on_chart(&HomPoly3::monomial(c.clone(), [e[0], e[1], 0]), 2);
            &acc + &m
        })
}

/// The known fifteen-parameter family of sections in closed form.
fn reference_family(c: &[Rational]) -> (HomRatio, HomRatio) {
    let c = |i: usize| c[i - 1].clone();
    let two = |q: Rational| rat(2) * q;
    let s1 = chart2_poly(&[
        (two(c(1)), [4, 0]),
        (two(c(2)), [3, 1]),
        (c(3), [3, 0]),
        (two(c(4)), [2, 2]),
        (c(1) + c(5), [2, 1]),
        (c(6) + c(7), [2, 0]),
        (c(2) + c(8), [1, 2]),
        (c(9) + c(10), [1, 1]),
        (c(11) + c(12), [1, 0]),
        (c(4), [0, 3]),
        (c(13), [0, 2]),
        (c(14), [0, 1]),
        (c(15), [0, 0]),
    ]);
    let s2 = chart2_poly(&[
        (two(c(1)), [3, 0]),
        (two(c(2)), [2, 1]),
        (c(3), [2, 0]),
        (two(c(4)), [1, 2]),
        (c(5), [1, 1]),
        (c(6), [1, 0]),
        (c(8), [0, 2]),
        (c(9), [0, 1]),
        (c(11), [0, 0]),
    ]);
    (s1, s2)
}

fn support(f: &HomRatio) -> BTreeSet<[i64; 2]> {
    f.chart_laurent(2)
        .expect("polynomial")
        .into_iter()
        .map(|(k, _)| k)
        .collect()
}

fn sections_example() -> Outcome {
    let bound = 4;
    let b4 = global_sections(4, 2, bound).map_err(err)?;
    let b5 = global_sections(4, 2, bound + 1).map_err(err)?;
    ensure(b4.dimension == 15 && b4.saturated, || {
        format!("bound 4: dim {} saturated {}", b4.dimension, b4.saturated)
    })?;
    ensure(b5.dimension == 15 && b5.saturated, || {
        format!("bound 5: dim {} saturated {}", b5.dimension, b5.saturated)
    })?;
    let full = reference_family(&(1..=15).map(rat).collect::<Vec<_>>());
    let (want1, want2) = (support(&full.0), support(&full.1));
    let got1: BTreeSet<_> = b4.basis.iter().flat_map(|s| support(&s.0)).collect();
    let got2: BTreeSet<_> = b4.basis.iter().flat_map(|s| support(&s.1)).collect();
    ensure(got1 == want1 && got2 == want2, || {
        format!("support {got1:?} / {got2:?}")
    })?;
    let computed: Vec<Vec<Rational>> = b4
        .basis
        .iter()
        .map(|s| section_coordinates(s, bound).unwrap())
        .collect();
    let reference: Vec<Vec<Rational>> = (1..=15)
        .map(|k| section_coordinates(&reference_family(&c_vector(k)), bound).unwrap())
        .collect();
    let mut both = computed.clone();
    both.extend(reference.iter().cloned());
    ensure(rank(&reference) == 15 && rank(&both) == 15, || {
        "reference family is not the computed space".into()
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(75);
    let generic = b4
        .basis
        .iter()
        .fold((HomRatio::zero(), HomRatio::zero()), |acc, s| {
            let c = HomRatio::constant(rat(rng.gen_range(-9..=9)));
            (&acc.0 + &(&s.0 * &c), &acc.1 + &(&s.1 * &c))
        });
    let (_, degree) = section_image_degree(4, 2, &generic).map_err(err)?;
    ensure(degree == 6, || format!("image degree {degree}"))?;
    Ok("dim 15 saturated at bounds 4, 5; reference family spans; image degree 6".into())
}

fn random_poly(rng: &mut ChaCha8Rng, deg: usize) -> UniPoly {
    UniPoly::from_ints(&(0..=deg).map(|_| rng.gen_range(-4..=4)).collect::<Vec<_>>())
}

fn birkhoff_round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..200 {
        let (e1, e2) = (rng.gen_range(-5..=5i64), rng.gen_range(-5..=5i64));
        let mut p =
            Mat2::<RatFunc>::diag(RatFunc::constant(rat(rng.gen_range(1..=3))), RatFunc::one());
        let mut q = Mat2::<RatFunc>::identity();
        for _ in 0..rng.gen_range(1..=3) {
            let f = RatFunc::from_poly(random_poly(&mut rng, 2));
            let g = RatFunc::from_poly(random_poly(&mut rng, 2)).invert_variable();
            let (ep, eq) = if rng.gen_bool(0.5) {
                (Mat2::upper(f), Mat2::lower(g))
            } else {
                (Mat2::lower(f), Mat2::upper(g))
            };
            p = p.mul(&ep);
            q = q.mul(&eq);
        }
        let d = Mat2::diag(RatFunc::x_pow(e1), RatFunc::x_pow(e2));
        let g = P1TransitionData::new(p.mul(&d).mul(&q)).map_err(err)?;
        let s = split_p1(&g).map_err(err)?;
        ensure(s.pair() == sorted(e1, e2), || {
            format!("case {case}: ({e1}, {e2}) split as {:?}", s.pair())
        })?;
        ensure(verify_factorization(&g, &s), || {
            format!("case {case}: factorization does not verify")
        })?;
    }
    Ok("200 seeded conjugations, e in [-5, 5]".into())
}

/// A random matrix invertible over `Q[x, 1/h]`.
fn chart_matrix(rng: &mut ChaCha8Rng, h: &UniPoly) -> Mat2<RatFunc> {
    let hf = RatFunc::from_poly(h.clone());
    let hi = hf.inv().unwrap();
    let entry = |rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(0..=1u32);
        &RatFunc::from_poly(random_poly(rng, 1)) * &hi.pow(k)
    };
    let k = rng.gen_range(-1..=1i64);
    let unit = if k >= 0 { hf.pow(k as u32) } else { hi.clone() };
    let mut m = Mat2::diag(unit.scale(&rat(rng.gen_range(1..=3))), RatFunc::one());
    for _ in 0..2 {
        m = m
            .mul(&Mat2::upper(entry(rng)))
            .mul(&Mat2::lower(entry(rng)));
    }
    m
}

fn affine_cocycles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..100 {
        let charts = if case % 2 == 0 { 2 } else { 3 };
        // Distinct integer roots; every root is missed by some chart.
        let mut roots: Vec<i64> = Vec::new();
        while roots.len() < 2 * charts {
            let r = rng.gen_range(-6..=6);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        let opens: Vec<DistinguishedOpen> = (0..charts)
            .map(|i| {
                let h = roots[2 * i..2 * i + 2]
                    .iter()
                    .take(1 + (case + i) % 2)
                    .fold(UniPoly::one(), |acc, r| {
                        &acc * &UniPoly::from_ints(&[-r, 1])
                    });
                DistinguishedOpen::new(h).unwrap()
            })
            .collect();
        let b: Vec<Mat2<RatFunc>> = opens
            .iter()
            .map(|u| chart_matrix(&mut rng, u.h()))
            .collect();
        let binv: Vec<Mat2<RatFunc>> = b.iter().map(|m| m.inverse().unwrap()).collect();
        let g = b
            .iter()
            .map(|bi| binv.iter().map(|bj| bi.mul(bj)).collect())
            .collect();
        let cocycle = AffineCocycle::new(opens, g).map_err(|e| format!("case {case}: {e}"))?;
        let a = trivialize_affine(&cocycle).map_err(|e| format!("case {case}: {e}"))?;
        ensure(verify_trivialization(&cocycle, &a), || {
            format!("case {case}: trivialization does not verify")
        })?;
    }
    Ok("100 seeded cocycles on 2 and 3 charts".into())
}

fn k_identity_holds<F: Field, C: ChartDomain<F>>(
    rep: &AdmissiblePairRep<F, C>,
    name: &str,
) -> Result<(), String> {
    for i in 0..rep.len() {
        for j in 0..rep.len() {
            let lhs = k_plus(rep, i, j)
                .map_err(err)?
                .mul(&k_minus(rep, i, j).map_err(err)?);
            let rhs = Mat2::scalar(rep.matrices[j].a1.div(&rep.matrices[i].a1).unwrap());
            ensure(lhs == rhs, || {
                format!("{name}: K+K- != (a_j1/a_i1) E on ({i}, {j})")
            })?;
        }
    }
    Ok(())
}

fn k_identity() -> Outcome {
    k_identity_holds(&standard_conic_pair(), "conic cover")?;
    k_identity_holds(&two_point_cover_pair(), "two-point cover")?;
    Ok("all chart pairs of both covers".into())
}

fn inverse_consistency() -> Outcome {
    let cover = ConicCover::standard();
    let pair = standard_conic_pair();
    for line in random_lines(&cover, 5, 8).map_err(err)? {
        let got = splitting_for_pairs(&cover, &[&pair, &pair], &[1, -1], &line)
            .map_err(err)?
            .pair();
        ensure(got == (0, -1), || {
            format!("line {:?}: got {got:?}", line.form)
        })?;
    }
    Ok("n = [1, -1] on 5 lines".into())
}

fn random_form(rng: &mut ChaCha8Rng, degree: u32) -> HomPoly3 {
    let terms = (0..=degree).flat_map(|a| (0..=degree - a).map(move |b| [a, b, degree - a - b]));
    let terms: Vec<_> = terms.map(|e| (rat(rng.gen_range(-3..=3)), e)).collect();
    HomPoly3::from_terms(degree, terms).unwrap()
}

fn branch_decomposition() -> Outcome {
    let f = HomPoly3::from_int_terms(&[(1, [2, 0, 0]), (1, [0, 1, 1])]);
    let got = branch_decompose(&f, &HomPoly3::var(1)).map_err(err)?;
    ensure(got == Some((HomPoly3::var(0), HomPoly3::var(2))), || {
        format!("x1: got {got:?}")
    })?;
    ensure(
        branch_decompose(&f, &HomPoly3::var(0))
            .map_err(err)?
            .is_none(),
        || "x0 decomposed".into(),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..50 {
        let l = rng.gen_range(1..=4u32);
        let lin = loop {
            let lin = random_form(&mut rng, 1);
            if !lin.is_zero() {
                break lin;
            }
        };
        let a0 = random_form(&mut rng, l);
        let a1 = random_form(&mut rng, 2 * l - 1);
        let big = &(&a0 * &a0) + &(&lin * &a1);
        let (b0, b1) = branch_decompose(&big, &lin)
            .map_err(err)?
            .ok_or_else(|| format!("case {case}: no decomposition found"))?;
        ensure(&(&b0 * &b0) + &(&lin * &b1) == big, || {
            format!("case {case}: identity fails")
        })?;
    }
    Ok("examples plus 50 seeded round trips".into())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("two-point cover table", two_point_table),
        ("transversal lines", transversal_lines),
        ("tangent lines and jumping", tangent_lines_jump),
        ("bidegree (4,2) sections", sections_example),
        ("Birkhoff round trips", birkhoff_round_trips),
        ("affine trivialization", affine_cocycles),
        ("K-identity", k_identity),
        ("inverse consistency", inverse_consistency),
        ("branch decomposition", branch_decomposition),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
