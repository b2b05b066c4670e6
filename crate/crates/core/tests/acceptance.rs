//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use abelian_core::engine::{
    abelian_coefficients_n4, abelian_integral, assemble_abelian, level_for_degree, random_perturbation,
    random_zero_set, synthesize, CoefTable, Perturbation, ReductionTable, Relation,
};
use abelian_core::exactmath::{
    count_positive_roots, rational_to_f64, ExactMatrix, HPoly, Scalar, SurdField, SurdScalar,
};
use abelian_core::quadrature::quad_iij;
use abelian_core::sim::{
    integrate_orbit, locate_cycles, scan_displacement, section_point, FlowConfig, SearchConfig, StopCondition, System,
};
use common::{dy_residual, eval_exact, field, melnikov_agreement, q, quadrature_residual};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Poly = HPoly<SurdScalar>;
/// `(coefficient, power of h, i, j)`.
type Combo = Vec<(BigRational, usize, usize, usize)>;

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

fn pow(x: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

/// `π·λ^{a/2}·(1−λ)^{−b/2}` for odd a, b, as a multiple of π·s.
fn u(f: &Arc<SurdField>, a: usize, b: usize) -> SurdScalar {
    let l = f.lambda();
    let r = pow(l, (a - 1) / 2) / pow(&(BigRational::one() - l), b.div_ceil(2));
    SurdScalar::pi_s(f).scale(&r)
}

fn poly(terms: &[(usize, SurdScalar)]) -> Poly {
    terms.iter().fold(Poly::zero(), |acc, (k, c)| acc.try_add(&HPoly::monomial(c.clone(), *k)).unwrap())
}

/// `Σ c·h^p·I(i,j)` over the table.
fn combo(t: &ReductionTable<SurdScalar>, terms: &[(BigRational, usize, usize, usize)]) -> Poly {
    terms
        .iter()
        .fold(Poly::zero(), |acc, (c, p, i, j)| acc.try_add(&t.reduce(*i, *j).unwrap().scale(c).shift(*p)).unwrap())
}

fn xi(x: &CoefTable, i: usize, j: usize) -> BigRational {
    x.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
}

fn coefficient(p: &Poly, k: usize, f: &Arc<SurdField>) -> SurdScalar {
    p.coeff(k).cloned().unwrap_or_else(|| SurdScalar::zero(f))
}

fn sum(f: &Arc<SurdField>, parts: &[SurdScalar]) -> SurdScalar {
    parts.iter().fold(SurdScalar::zero(f), |acc, x| acc.try_add(x).unwrap())
}

const EXACT_LAMBDAS: [(i64, i64); 3] = [(1, 2), (1, 3), (2, 7)];

fn criterion_1() -> Check {
    let mut identities = 0;
    for (a, b) in EXACT_LAMBDAS {
        let f = field(a, b);
        let l = f.lambda().clone();
        let base = ReductionTable::<SurdScalar>::base_integrals(&f);
        let t = ReductionTable::<SurdScalar>::build(&f, 5).map_err(err)?;
        let one_minus = BigRational::one() - &l;
        let closed = [
            ((0, 1), poly(&[(1, u(&f, 1, 1).scale(&q(-2, 1)))])),
            ((0, 2), poly(&[(2, u(&f, 3, 3).scale(&q(2, 1)))])),
            ((1, 2), poly(&[(2, u(&f, 3, 3).scale(&q(2, 1)))])),
            (
                (0, 3),
                poly(&[(3, u(&f, 3, 5).scale(&(q(-3, 1) * &l))), (2, u(&f, 3, 5).scale(&(q(-3, 1) * &one_minus)))]),
            ),
            ((1, 3), poly(&[(3, u(&f, 5, 5).scale(&q(-6, 1)))])),
        ];
        for ((i, j), expected) in &closed {
            let got = base.get(*i, *j).ok_or_else(|| format!("base table lacks I({i},{j})"))?;
            ensure(got == expected, || format!("λ={l}: I({i},{j}) = {got:?}, closed form {expected:?}"))?;
            identities += 1;
        }
        let inv = BigRational::one() / &l;
        let r = |n: i64, d: i64| q(n, d);
        let relations: [(&str, (usize, usize), Combo); 5] = [
            ("I(2,1)", (2, 1), vec![(r(-1, 2) * &inv, 0, 0, 2)]),
            (
                "I(2,2)",
                (2, 2),
                vec![(r(1, 7), 1, 0, 1), (-(&l + r(6, 1)) / (r(7, 1) * &l), 0, 0, 2), (r(-2, 3) * &inv, 0, 0, 3)],
            ),
            (
                "I(3,2)",
                (3, 2),
                vec![
                    (r(-3, 14), 1, 0, 1),
                    (r(-3, 14) * &inv, 0, 0, 2),
                    (r(2, 3) * &inv, 0, 0, 3),
                    ((r(3, 1) * &l + r(14, 1)) / (r(14, 1) * &l), 0, 1, 2),
                    (r(-2, 3) * &inv, 0, 1, 3),
                ],
            ),
            (
                "I(4,1)",
                (4, 1),
                vec![
                    (r(-1, 28) * &inv, 1, 0, 1),
                    (r(3, 14) * &inv * &inv, 0, 0, 2),
                    (r(1, 3) * &inv * &inv, 0, 0, 3),
                    ((&l + r(7, 1)) / (r(28, 1) * &l * &l), 0, 1, 2),
                ],
            ),
            (
                "I(2,3)",
                (2, 3),
                vec![
                    ((r(42, 1) * &l - r(37, 1)) / r(210, 1), 1, 0, 1),
                    (r(28, 210), 1, 0, 2),
                    ((r(42, 1) * &l - r(37, 1)) / (r(210, 1) * &l), 0, 0, 2),
                    (r(-28, 45) * (&l - r(1, 1)) * &inv, 0, 0, 3),
                    (r(-3, 4) * &inv, 0, 0, 4),
                    ((r(2, 1) * &l - r(7, 1)) / (r(5, 1) * &l), 0, 1, 3),
                    (r(-504, 210), 1, 1, 2),
                    (-(r(42, 1) * &l * &l + r(159, 1) * &l - r(196, 1)) / (r(210, 1) * &l), 0, 1, 2),
                ],
            ),
        ];
        for (name, (i, j), rhs) in relations {
            let lhs = t.reduce(i, j).map_err(err)?;
            ensure(lhs == combo(&t, &rhs), || format!("λ={l}: relation for {name} fails"))?;
            identities += 1;
        }
    }
    Ok(format!("{identities} exact identities over λ ∈ {{1/2, 1/3, 2/7}}"))
}

/// Small-degree forms of I(h) for n = 1..4; the n = 4 form carries `ξ(2,2)·I(2,2)` with the exact `I(2,2)`.
fn lemma_form(n: usize, x: &CoefTable, t: &ReductionTable<SurdScalar>, lambda: &BigRational) -> Poly {
    let half_inv = q(1, 2) / lambda;
    let mut terms = vec![(xi(x, 0, 1), 0, 0, 1)];
    if n >= 2 {
        let mut c02 = xi(x, 0, 2);
        if n >= 3 {
            c02 -= &half_inv * xi(x, 2, 1);
        }
        terms.push((c02, 0, 0, 2));
    }
    if n >= 3 {
        terms.push((xi(x, 0, 3), 0, 0, 3));
        terms.push((xi(x, 1, 2), 0, 1, 2));
    }
    if n >= 4 {
        terms.push((xi(x, 0, 4), 0, 0, 4));
        terms.push((xi(x, 1, 3), 0, 1, 3));
        let x22 = xi(x, 2, 2);
        terms.push((&x22 * q(1, 7), 1, 0, 1));
        terms.push((-&x22 * (lambda + q(6, 1)) / (q(7, 1) * lambda), 0, 0, 2));
        terms.push((-&x22 * q(2, 3) / lambda, 0, 0, 3));
    }
    combo(t, &terms)
}

fn alphas(n: usize, f: &Arc<SurdField>, x: &CoefTable) -> Vec<SurdScalar> {
    let l = f.lambda();
    let a1 = u(f, 1, 1).scale(&(q(-2, 1) * xi(x, 0, 1)));
    match n {
        2 => vec![a1, u(f, 3, 3).scale(&(q(2, 1) * xi(x, 0, 2)))],
        3 | 4 => {
            let a2 = sum(
                f,
                &[
                    u(f, 3, 3).scale(&(q(2, 1) * xi(x, 0, 2))),
                    u(f, 3, 3).scale(&(q(-3, 1) * xi(x, 0, 3))),
                    u(f, 3, 3).scale(&(q(2, 1) * xi(x, 1, 2))),
                    u(f, 1, 3).scale(&(q(-1, 1) * xi(x, 2, 1))),
                ],
            );
            if n == 3 {
                return vec![a1, a2, u(f, 5, 5).scale(&(q(-3, 1) * xi(x, 0, 3)))];
            }
            let a3 = sum(
                f,
                &[
                    u(f, 5, 5).scale(&(q(-3, 1) * xi(x, 0, 3))),
                    u(f, 5, 7).scale(&(q(-4, 1) * (q(2, 1) * l * l - l - q(1, 1)) * xi(x, 0, 4))),
                    u(f, 5, 5).scale(&(q(-6, 1) * xi(x, 1, 3))),
                    u(f, 3, 5).scale(&(q(2, 1) * xi(x, 2, 2))),
                ],
            );
            vec![a1, a2, a3, u(f, 7, 7).scale(&(q(5, 1) * xi(x, 0, 4)))]
        }
        _ => vec![a1],
    }
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut compared = 0;
    let mut alt_mismatch = 0;
    let mut alt_alpha_mismatch = 0;
    for (a, b) in EXACT_LAMBDAS {
        let f = field(a, b);
        let l = f.lambda().clone();
        let t = ReductionTable::<SurdScalar>::build(&f, level_for_degree(4)).map_err(err)?;
        for n in 1..=4 {
            for _ in 0..25 {
                let p = random_perturbation(&mut rng, n, 0.8);
                let x = p.xi();
                let got = assemble_abelian(&p, &t).map_err(err)?;
                ensure(got == lemma_form(n, &x, &t, &l), || format!("λ={l}, n={n}: lemma form differs for {p:?}"))?;
                if n == 4 && !xi(&x, 2, 2).is_zero() {
                    // a variant n = 4 form that charges ξ(2,2) to I(0,2) instead
                    let variant = lemma_form(3, &x, &t, &l)
                        .try_add(&combo(
                            &t,
                            &[
                                (xi(&x, 0, 4), 0, 0, 4),
                                (xi(&x, 1, 3), 0, 1, 3),
                                (-xi(&x, 2, 2) * q(1, 2) / &l, 0, 0, 2),
                            ],
                        ))
                        .unwrap();
                    if variant != got {
                        alt_mismatch += 1;
                    }
                }
                if n >= 2 {
                    let expected = alphas(n, &f, &x);
                    for (k, e) in expected.iter().enumerate() {
                        let c = coefficient(&got, k + 1, &f);
                        ensure(&c == e, || format!("λ={l}, n={n}: α{} = {c}, formula {e}", k + 1))?;
                    }
                    ensure(got.degree().unwrap_or(0) <= n, || format!("degree above {n}"))?;
                }
                if n == 4 && !xi(&x, 0, 3).is_zero() {
                    // variant α₂ with −3πλ^(3/2)(λ−1)(1−λ)^(−5/2)·ξ(0,3), i.e. +3u(3,3)·ξ(0,3)
                    let literal = alphas(4, &f, &x)[1].try_add(&u(&f, 3, 3).scale(&(q(6, 1) * xi(&x, 0, 3)))).unwrap();
                    if literal != coefficient(&got, 2, &f) {
                        alt_alpha_mismatch += 1;
                    }
                }
                if n == 4 {
                    let engine = abelian_coefficients_n4(&f, &p);
                    ensure(engine.to_vec() == alphas(4, &f, &x), || "engine closed form disagrees".into())?;
                }
                compared += 1;
            }
        }
        let columns: Vec<Vec<SurdScalar>> = (1..=3)
            .map(|k| {
                let p = assemble_abelian(&Perturbation::new(3).with_b(0, k, q(1, 1)), &t).unwrap();
                (1..=3).map(|e| coefficient(&p, e, &f)).collect()
            })
            .collect();
        let (det, pi) = ExactMatrix::from_columns(columns).map_err(err)?.determinant().map_err(err)?;
        let one_minus = BigRational::one() - &l;
        let expected = SurdScalar::s(&f).scale(&(q(12, 1) * pow(&l, 4) / pow(&one_minus, 5)));
        ensure(pi == 3 && det == expected, || format!("λ={l}: Jacobian {det} π^{pi}"))?;
    }
    Ok(format!(
        "{compared} random perturbations match the n = 1..4 forms and α formulas; Jacobian 12π³λ^(9/2)(1−λ)^(−9/2); variant ξ(2,2) form off in {alt_mismatch} cases, variant α₂ off in {alt_alpha_mismatch}"
    ))
}

fn criterion_3() -> Check {
    let f = field(1, 2);
    let i = abelian_integral::<SurdScalar>(&Perturbation::worked_quartic(), &f).map_err(err)?;
    // at λ = 1/2, π = 2·π·s
    let pi = SurdScalar::pi_s(&f).scale(&q(2, 1));
    let expected = poly(&[
        (1, pi.scale(&q(-4, 1))),
        (2, pi.scale(&q(55, 1))),
        (3, pi.scale(&q(-325, 2))),
        (4, pi.scale(&q(125, 1))),
    ]);
    ensure(i == expected, || format!("I(h) = {i:?}"))?;
    let report = count_positive_roots(&i).map_err(err)?;
    let roots: Vec<Option<BigRational>> = report.roots.iter().map(|r| r.exact.clone()).collect();
    ensure(report.count == 3 && roots == vec![Some(q(1, 10)), Some(q(2, 5)), Some(q(4, 5))], || {
        format!("roots {roots:?}")
    })?;
    Ok("I(h) = π(−4h + 55h² − 325/2·h³ + 125h⁴), roots exactly {1/10, 2/5, 4/5}".into())
}

fn criterion_4() -> Check {
    let mut worst: (f64, String) = (0.0, String::new());
    for (a, b) in [(1, 4), (1, 2), (3, 4)] {
        let f = field(a, b);
        let t = ReductionTable::<SurdScalar>::build(&f, level_for_degree(6)).map_err(err)?;
        for (hn, hd) in [(1, 10), (1, 1), (5, 1)] {
            let h = q(hn, hd);
            for i in 0..=6 {
                for j in 0..=6 - i {
                    let exact = eval_exact(&t.reduce(i, j).map_err(err)?, &h);
                    let quad =
                        quad_iij(rational_to_f64(f.lambda()), rational_to_f64(&h), i, j, 1e-12).map_err(err)?.value;
                    // entries that vanish identically are compared absolutely
                    let e = if exact == 0.0 { quad.abs() } else { ((quad - exact) / exact).abs() };
                    if e > worst.0 {
                        worst = (e, format!("I({i},{j}) at λ={a}/{b}, h={h}"));
                    }
                }
            }
        }
    }
    ensure(worst.0 <= 1e-8, || format!("max error {:.3e} at {}", worst.0, worst.1))?;
    Ok(format!("max error {:.2e} ({}) ≤ 1e-8", worst.0, worst.1))
}

fn criterion_5() -> Check {
    let lambda = 0.5;
    let mut worst: (f64, String) = (0.0, String::new());
    let mut count = 0;
    let mut note = |r: f64, what: String| {
        count += 1;
        if r > worst.0 {
            worst = (r, what);
        }
    };
    for h in [0.5, 2.0] {
        for i in 0..=6i64 {
            for j in 0..=6 - i {
                note(dy_residual(lambda, h, i as usize, j as usize), format!("dy form ({i},{j}) h={h}"));
                let rules = [
                    Relation::from_differentiated_level(i, j, &lambda),
                    Relation::from_level_identity(i, j, &lambda),
                    Relation::lower_first_index(i, j, &lambda),
                    Relation::mixed_recurrence(i, j, &lambda),
                ];
                for rel in rules.into_iter().flatten() {
                    note(quadrature_residual(&rel, lambda, h), format!("{} ({i},{j}) h={h}", rel.name));
                }
            }
        }
        for m in 1..=3 {
            let rel = Relation::raise_second_row(m, &lambda).unwrap();
            note(quadrature_residual(&rel, lambda, h), format!("{} m={m} h={h}", rel.name));
        }
    }
    ensure(worst.0 <= 1e-6, || format!("residual {:.3e} for {}", worst.0, worst.1))?;
    Ok(format!("{count} identities, max relative residual {:.2e} ≤ 1e-6", worst.0))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut total = 0;
    let mut most = 0;
    for (a, b) in [(1, 3), (1, 2), (2, 3)] {
        let f = field(a, b);
        let t = ReductionTable::<SurdScalar>::build(&f, level_for_degree(6)).map_err(err)?;
        for n in 2..=6 {
            for _ in 0..200 {
                let p = random_perturbation(&mut rng, n, 0.6);
                let i = assemble_abelian(&p, &t).map_err(err)?;
                ensure(i.constant_is_zero() && i.degree().unwrap_or(0) <= n, || format!("shape of I for {p:?}"))?;
                if !i.is_zero() {
                    let c = count_positive_roots(&i).map_err(err)?.count;
                    ensure(c < n, || format!("{c} zeros at n={n}"))?;
                    most = most.max(c);
                }
                total += 1;
            }
        }
    }
    Ok(format!("{total} perturbations, zero counts within n−1 (largest seen {most})"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let lambdas = [(1, 2), (1, 3), (3, 4)];
    for k in 0..50 {
        let count = 1 + k % 5;
        let zeros = random_zero_set(&mut rng, count);
        let (a, b) = lambdas[k % 3];
        let f = field(a, b);
        let s = synthesize(&zeros, &f).map_err(err)?;
        let report = count_positive_roots(&s.integral).map_err(err)?;
        let found: Vec<Option<BigRational>> = report.roots.iter().map(|r| r.exact.clone()).collect();
        let want: Vec<Option<BigRational>> = zeros.iter().cloned().map(Some).collect();
        ensure(found == want, || format!("targets {zeros:?} gave {found:?}"))?;
    }
    Ok("50 zero sets of size 1..5 recovered exactly".into())
}

fn energies(system: &System, range: (f64, f64)) -> Result<Vec<f64>, String> {
    let found = locate_cycles(system, range, &SearchConfig::default()).map_err(err)?;
    Ok(found.cycles.iter().map(|c| c.energy).collect())
}

fn near(found: &[f64], targets: &[f64], tol: f64) -> bool {
    found.len() == targets.len() && found.iter().zip(targets).all(|(e, z)| (e - z).abs() <= tol)
}

fn criterion_8() -> Check {
    let quartic = System::new(0.5, 1e-4, &Perturbation::worked_quartic()).map_err(err)?;
    let e = energies(&quartic, (0.01, 1.2))?;
    ensure(near(&e, &[0.1, 0.4, 0.8], 0.05), || format!("system cycles at {e:?}"))?;

    let f = field(1, 2);
    let syn = synthesize(&[q(1, 3), q(1, 2)], &f).map_err(err)?;
    let s = System::new(0.5, 1e-4 / syn.perturbation.max_abs(), &syn.perturbation).map_err(err)?;
    let e3 = energies(&s, (0.01, 0.75))?;
    ensure(near(&e3, &[1.0 / 3.0, 0.5], 0.05), || format!("synthesized cycles at {e3:?}"))?;

    let still = System::new(0.5, 0.0, &Perturbation::worked_quartic()).map_err(err)?;
    let e0 = energies(&still, (0.01, 1.2))?;
    ensure(e0.is_empty(), || format!("ε = 0 produced cycles at {e0:?}"))?;
    let mut drift: f64 = 0.0;
    for h in [0.1, 0.4, 1.0] {
        let x0 = section_point(0.5, h);
        let tr = integrate_orbit(&still, [x0, 0.0], &FlowConfig::default(), StopCondition::Revolutions(100), false)
            .map_err(err)?;
        let end = tr.crossings.last().ok_or("no crossings")?;
        drift = drift.max((still.energy(end.x, end.y) - h).abs());
    }
    ensure(drift <= 1e-7, || format!("energy drift {drift:e}"))?;
    Ok(format!("cycles at {:.4?}; synthesized {:.4?}; ε = 0: none, drift {drift:.1e} per 100 revolutions", e, e3))
}

fn criterion_9() -> Check {
    let p = Perturbation::worked_quartic();
    let integral = abelian_integral::<SurdScalar>(&p, &field(1, 2)).map_err(err)?;
    let cfg = FlowConfig::default();
    // the first-order relation is asymptotic in ε; at ε = 1e-4 the zeros of the
    // displacement sit O(ε) away from those of I, see the finite-ε line below
    let eps = 1e-6;
    let s = System::new(0.5, eps, &p).map_err(err)?;
    let scan = scan_displacement(&s, (0.01, 1.2), 200, &cfg).map_err(err)?;
    let (checked, agree) = melnikov_agreement(&integral, eps, &scan);
    ensure(checked == agree, || format!("ε = {eps:e}: {agree}/{checked} signs agree"))?;
    let s4 = System::new(0.5, 1e-4, &p).map_err(err)?;
    let scan4 = scan_displacement(&s4, (0.01, 1.2), 200, &cfg).map_err(err)?;
    let (c4, a4) = melnikov_agreement(&integral, 1e-4, &scan4);
    Ok(format!(
        "displacement sign = −sign(ε·I) at {agree}/{checked} points with |I| > 10³ε², ε = {eps:e}; at ε = 1e-4: {a4}/{c4}"
    ))
}

fn main() -> ExitCode {
    let criteria: [(fn() -> Check, Duration); 9] = [
        (criterion_1, Duration::from_secs(1)),
        (criterion_2, Duration::from_secs(1)),
        (criterion_3, Duration::from_secs(1)),
        (criterion_4, Duration::from_secs(60)),
        (criterion_5, Duration::from_secs(60)),
        (criterion_6, Duration::from_secs(120)),
        (criterion_7, Duration::from_secs(60)),
        (criterion_8, Duration::from_secs(600)),
        (criterion_9, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (k, (run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow, limit {limit:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {}: {} [{:.2?}] {}", k + 1, if ok { "PASS" } else { "FAIL" }, took, detail);
    }
    if failed == 0 {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 9 criteria fail");
        ExitCode::FAILURE
    }
}
