//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use abp_core::abp::{AbpGraph, CombineOp};
use abp_core::constructions::{
    build_bivariate_abp, build_charzero_abp, build_gradient_abp, width_from_determinantal,
    PublishedComparison,
};
use abp_core::identities::{cpc, transposed_gradient, verify_identity, IdentityName};
use abp_core::oracle::{cpc_cycle_cover, cpc_minor_sum, det_leibniz, grad_ccp_entry};
use abp_core::{Polynomial, RingDescriptor};
use common::*;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })
}

fn check_identities(
    grid: &[(IdentityName, usize, usize)],
    rings: &[RingDescriptor],
) -> Result<usize, String> {
    let mut count = 0;
    for ring in rings {
        for &(id, n, d) in grid {
            let rep = verify_identity(id, n, d, ring, false)
                .map_err(|e| format!("{id} n={n} d={d}: {e}"))?;
            ensure(rep.passed, || rep.to_string())?;
            count += 1;
        }
    }
    Ok(count)
}

fn bivariate_ch_grid() -> Outcome {
    let start = Instant::now();
    let grid: Vec<_> = (1..=4)
        .flat_map(|n| (0..=4).map(move |d| (IdentityName::BivariateCh, n, d)))
        .collect();
    let count = check_identities(&grid, &ring_family())?;
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("{count} checks in {:.2?}", start.elapsed()))
}

fn corollaries() -> Outcome {
    let mut grid = Vec::new();
    for n in 1..=4 {
        grid.push((IdentityName::CayleyHamilton, n, n));
        grid.push((IdentityName::Adjugate, n, n - 1));
        for d in 0..=4 {
            grid.push((IdentityName::TraceCh, n, d));
            grid.push((IdentityName::SamuelsonEntry, n, d));
            grid.push((IdentityName::CpcRecursion, n, d));
        }
    }
    for n in 1..=5 {
        grid.extend((0..=5).map(|d| (IdentityName::GirardNewton, n, d)));
    }
    let rings = [
        RingDescriptor::integers(),
        RingDescriptor::modular(4).unwrap(),
    ];
    let count = check_identities(&grid, &rings)?;
    Ok(format!("{count} checks"))
}

fn cross_oracles() -> Outcome {
    let z = RingDescriptor::integers();
    let mut count = 0;
    for n in 1..=5 {
        for d in 0..=5 {
            let (a, b) = (
                cpc_minor_sum(n, d, &z).map_err(|e| e.to_string())?,
                cpc_cycle_cover(n, d, &z).map_err(|e| e.to_string())?,
            );
            ensure(a == b, || {
                format!(
                    "cpc n={n} d={d}: {} vs {}",
                    a.to_canonical_string(),
                    b.to_canonical_string()
                )
            })?;
            count += 1;
        }
    }
    for n in 1..=4 {
        for d in 0..=3 {
            let grad = transposed_gradient(n, d, &z, false).map_err(|e| e.to_string())?;
            for a in 1..=n {
                for b in 1..=n {
                    let entry = grad_ccp_entry(n, d, a, b, &z).map_err(|e| e.to_string())?;
                    ensure(&entry == grad.get(a, b), || {
                        format!("ccp n={n} d={d} ({a},{b})")
                    })?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} comparisons"))
}

/// Parses `cpc_<i>_<j>`.
fn output_indices(name: &str) -> (usize, usize) {
    let mut it = name
        .strip_prefix("cpc_")
        .unwrap()
        .split('_')
        .map(|s| s.parse().unwrap());
    (it.next().unwrap(), it.next().unwrap())
}

fn check_outputs(g: &AbpGraph, what: &str) -> Result<usize, String> {
    let ring = g.ring().clone();
    let n = g.ambient_n();
    let all = g.expand_all().map_err(|e| format!("{what}: {e}"))?;
    for (name, p) in &all {
        let (i, j) = output_indices(name);
        let want = cpc(i, j, n, &ring).map_err(|e| e.to_string())?;
        ensure(*p == want, || {
            format!(
                "{what} ring={ring} output {name}: got {}",
                p.to_canonical_string()
            )
        })?;
    }
    Ok(all.len())
}

fn build(kind: usize, n: usize, d: usize, ring: &RingDescriptor) -> Result<AbpGraph, String> {
    match kind {
        0 => build_charzero_abp(n, d, ring),
        1 => build_bivariate_abp(n, d, ring),
        _ => build_gradient_abp(n, d, ring).map(|(g, _)| g),
    }
    .map_err(|e| e.to_string())
}

fn construction_correctness() -> Outcome {
    let q = RingDescriptor::rationals();
    let exact = [
        RingDescriptor::integers(),
        RingDescriptor::modular(4).unwrap(),
        RingDescriptor::modular(7).unwrap(),
    ];
    let mut outputs = 0;
    for n in 1..=5 {
        for d in 1..=n {
            outputs += check_outputs(&build(0, n, d, &q)?, &format!("charzero n={n} d={d}"))?;
            for ring in &exact {
                for kind in [1, 2] {
                    outputs += check_outputs(
                        &build(kind, n, d, ring)?,
                        &format!("builder {kind} n={n} d={d}"),
                    )?;
                }
            }
        }
    }
    let mut rng = rng(4);
    let mut evals = 0;
    for ring in ring_family() {
        let kinds: &[usize] = if ring.contains_rationals() {
            &[0, 1, 2]
        } else {
            &[1, 2]
        };
        for _ in 0..100 {
            let kind = kinds[rng.gen_range(0..kinds.len())];
            let n = rng.gen_range(1..=4);
            let d = rng.gen_range(1..=n);
            let g = build(kind, n, d, &ring)?;
            let a = random_matrix(&ring, n, &mut rng);
            for name in g.outputs().keys() {
                let (i, j) = output_indices(name);
                let got = g.evaluate(&a, name).map_err(|e| e.to_string())?;
                let want = cpc(i, j, n, &ring)
                    .and_then(|p| p.evaluate(&a))
                    .map_err(|e| e.to_string())?;
                ensure(got == want, || {
                    format!("evaluate {name} ring={ring}: {got} vs {want}")
                })?;
            }
            evals += 1;
        }
    }
    Ok(format!(
        "{outputs} outputs expanded, {evals} random evaluations"
    ))
}

fn binom(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
}

fn count_formulas() -> Outcome {
    let z = RingDescriptor::integers();
    for n in 2..=8 {
        for d in 2..=n {
            let (_, s) = build_gradient_abp(n, d, &z).map_err(|e| e.to_string())?;
            let layers: Vec<usize> = (1..d).map(|j| (n - j) * (n + j + 1) / 2).collect();
            ensure(s.per_layer_counts == layers, || {
                format!("n={n} d={d}: layers {:?} vs {layers:?}", s.per_layer_counts)
            })?;
            ensure(s.width == binom(n + 1, 2) - 1, || {
                format!("n={n} d={d}: width {}", s.width)
            })?;
            let total = (d - 1) * binom(n + 1, 2) - binom(d + 1, 3);
            ensure(s.intermediate_total == total, || {
                format!("n={n} d={d}: total {} vs {total}", s.intermediate_total)
            })?;
        }
    }
    let (_, s) = build_gradient_abp(5, 5, &z).map_err(|e| e.to_string())?;
    ensure((s.width, s.intermediate_total) == (14, 40), || {
        format!("n=5: {:?}", (s.width, s.intermediate_total))
    })?;
    let c30 = PublishedComparison::from_formulas(30);
    ensure((c30.vertex_ratio - 27000.0 / 8990.0).abs() < 1e-12, || {
        c30.to_string()
    })?;
    ensure((c30.width_ratio - 900.0 / 464.0).abs() < 1e-12, || {
        c30.to_string()
    })?;
    let mut prev = PublishedComparison::from_formulas(4);
    for n in 5..=200 {
        let c = PublishedComparison::from_formulas(n);
        ensure(
            c.vertex_ratio < prev.vertex_ratio && c.vertex_ratio > 3.0,
            || c.to_string(),
        )?;
        ensure(
            c.width_ratio > prev.width_ratio && c.width_ratio < 2.0,
            || c.to_string(),
        )?;
        prev = c;
    }
    ensure(
        (prev.vertex_ratio - 3.0).abs() < 0.01 && (2.0 - prev.width_ratio) < 0.02,
        || prev.to_string(),
    )?;
    Ok(format!("{}; {}", s.comparison(), c30))
}

fn same_poly(a: &Polynomial, b: &Polynomial, what: &str) -> Result<(), String> {
    ensure(a == b, || {
        format!(
            "{what}: {} vs {}",
            a.to_canonical_string(),
            b.to_canonical_string()
        )
    })
}

fn transformations() -> Outcome {
    let mut rng = rng(6);
    let rings = ring_family();
    let err = |e: abp_core::Error| e.to_string();
    let mut dims = (0, 0);
    for round in 0..50 {
        let ring = &rings[round % rings.len()];
        let n = rng.gen_range(1..=3);

        let g = random_abp(ring, n, rng.gen_range(1..=4), 3, &mut rng);
        let p = g.eliminate_constant_edges().map_err(err)?;
        ensure(p.validate().is_empty(), || {
            format!("eliminate: {:?}", p.validate())
        })?;
        ensure(p.width() <= g.width(), || "eliminate widened".into())?;
        same_poly(
            &p.expand_symbolic("f").map_err(err)?,
            &g.expand_symbolic("f").map_err(err)?,
            "eliminate",
        )?;

        let a = random_aabp(ring, n, rng.gen_range(2..=5), &mut rng);
        let f = a.expand_symbolic("f").map_err(err)?;
        let k = rng.gen_range(0..=f.degree() + 1);
        let h = a.homogenize(k).map_err(err)?;
        ensure(h.validate().is_empty(), || {
            format!("homogenize: {:?}", h.validate())
        })?;
        ensure(h.width() <= a.asize().max(1), || {
            format!("homogenize width {} asize {}", h.width(), a.asize())
        })?;
        same_poly(
            &h.expand_symbolic("f").map_err(err)?,
            &f.homogeneous_component(k),
            "homogenize",
        )?;

        let d = rng.gen_range(1..=3);
        let g1 = random_abp(ring, n, d, 2, &mut rng);
        let g2 = random_abp(
            ring,
            n,
            if rng.gen_bool(0.5) {
                d
            } else {
                rng.gen_range(1..=3)
            },
            2,
            &mut rng,
        );
        let (f1, f2) = (
            g1.expand_symbolic("f").map_err(err)?,
            g2.expand_symbolic("f").map_err(err)?,
        );
        let (w1, w2) = (g1.width(), g2.width());
        if g1.d() == g2.d() {
            let s = AbpGraph::combine(&g1, &g2, CombineOp::Sum).map_err(err)?;
            same_poly(&s.expand_symbolic("sum").map_err(err)?, &(&f1 + &f2), "sum")?;
            ensure(s.width() <= w1 + w2, || {
                format!("sum width {} > {w1}+{w2}", s.width())
            })?;
        }
        let pr = AbpGraph::combine(&g1, &g2, CombineOp::Product).map_err(err)?;
        same_poly(
            &pr.expand_symbolic("product").map_err(err)?,
            &(&f1 * &f2),
            "product",
        )?;
        ensure(pr.width() <= w1.max(w2), || {
            format!("product width {} > max({w1},{w2})", pr.width())
        })?;

        let g = random_abp(ring, n, rng.gen_range(1..=3), 2, &mut rng);
        let m = g.abp_to_determinant().map_err(err)?;
        ensure(m.rows() <= g.d() * g.width(), || {
            format!("determinant size {} > {}*{}", m.rows(), g.d(), g.width())
        })?;
        same_poly(
            &det_leibniz(&m).map_err(err)?,
            &g.expand_symbolic("f").map_err(err)?,
            "determinant",
        )?;
        dims = (dims.0 + 1, dims.1.max(m.rows()));
    }
    Ok(format!(
        "50 rounds of each transformation, largest determinant {}x{}",
        dims.1, dims.1
    ))
}

fn determinantal_recovery() -> Outcome {
    let q = RingDescriptor::rationals();
    let mut rng = rng(7);
    let start = Instant::now();
    let mut planted = 0;
    while planted < 20 {
        let n = rng.gen_range(1..=2);
        let d = rng.gen_range(1..=3);
        // s = 1 + sum of intermediate widths <= 4
        let widths: Vec<usize> = match d {
            1 => vec![],
            2 => vec![rng.gen_range(1..=3)],
            _ => {
                let a = rng.gen_range(1..=2);
                vec![a, rng.gen_range(1..=3 - a)]
            }
        };
        let g = random_pabp(&q, n, &widths, &mut rng);
        let m0 = g.abp_to_determinant().map_err(|e| e.to_string())?;
        let s = m0.rows();
        let p = random_invertible(&q, n, s, &mut rng);
        let r = random_invertible(&q, n, s, &mut rng);
        let m = p
            .mul(&m0)
            .and_then(|x| x.mul(&r))
            .map_err(|e| e.to_string())?;
        let want = det_leibniz(&m).map_err(|e| e.to_string())?;
        if want.is_zero() {
            continue;
        }
        let h = width_from_determinantal(&m, d, &q).map_err(|e| format!("s={s} d={d}: {e}"))?;
        ensure(h.validate().is_empty(), || {
            format!("recovered program invalid: {:?}", h.validate())
        })?;
        same_poly(
            &h.expand_symbolic("f").map_err(|e| e.to_string())?,
            &want,
            &format!("s={s} d={d}"),
        )?;
        planted += 1;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "{planted} planted instances in {:.2?}",
        start.elapsed()
    ))
}

fn transition_product() -> Outcome {
    let z = RingDescriptor::integers();
    for d in 2..=4 {
        let rep = verify_identity(IdentityName::TransitionProduct, d, d, &z, false)
            .map_err(|e| e.to_string())?;
        ensure(rep.passed, || rep.to_string())?;
    }
    Ok("d = 2, 3, 4".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        (
            "bivariate Cayley-Hamilton, n<=4, d<=4, over Z, Z/4, Z/7, Q",
            bivariate_ch_grid,
        ),
        ("corollary identities over Z and Z/4", corollaries),
        (
            "minor sums vs cycle covers, CCP entries vs gradients",
            cross_oracles,
        ),
        (
            "construction outputs and random evaluations",
            construction_correctness,
        ),
        (
            "gradient construction counts and comparison",
            count_formulas,
        ),
        ("transformations on random programs", transformations),
        (
            "recovery from planted determinantal representations",
            determinantal_recovery,
        ),
        ("transition product for d = 2, 3, 4", transition_product),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
