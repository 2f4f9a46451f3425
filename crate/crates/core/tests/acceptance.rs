//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use fermat_ws::curve::{
    apply_automorphism, enumerate_places, orbit, rational_place_census, sample_hermitian_places,
    sample_places, standard_generators, AutGen, AutWord, CurveCtx, Place,
};
use fermat_ws::field::poly;
use fermat_ws::oracle::{f0_tilde_expansion, gap_set_oracle, rr_valuation_spectrum, GapSet};
use fermat_ws::series::{hermitian_expand, TruncSeries, Valuation};
use fermat_ws::theorems::counting::Identity;
use fermat_ws::theorems::semigroup::gaps_of_generated;
use fermat_ws::theorems::{closed_form_gaps, pq_polynomials, Branch, POrder};
use fermat_ws::make_curve;

const HALF: [(u64, u32, u64); 4] = [(7, 1, 4), (3, 2, 5), (11, 1, 6), (13, 1, 7)];
const THIRD: [(u64, u32, u64); 4] = [(11, 1, 4), (17, 1, 6), (23, 1, 8), (2, 5, 11)];
const DEGREE_TWO_SAMPLES: usize = 6;
const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

struct Curve {
    ctx: CurveCtx,
    /// Rational affine places outside O, then sampled degree-2 places.
    tested: Vec<Place>,
}

fn curves() -> &'static Vec<Curve> {
    static CURVES: OnceLock<Vec<Curve>> = OnceLock::new();
    CURVES.get_or_init(|| {
        HALF.iter()
            .chain(THIRD.iter())
            .map(|&(p, e, m)| {
                let ctx = make_curve(p, e, m).expect("valid curve");
                let mut tested: Vec<Place> = enumerate_places(&ctx, 1)
                    .expect("enumeration")
                    .into_iter()
                    .filter(|p| !p.in_o())
                    .collect();
                tested.extend(sample_places(&ctx, 2, DEGREE_TWO_SAMPLES, SEED).expect("samples"));
                Curve { ctx, tested }
            })
            .collect()
    })
}

fn label(ctx: &CurveCtx) -> String {
    format!("q={} m={}", ctx.q(), ctx.m())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// closed form against oracle at every tested place of one curve
fn theorem_vs_oracle(c: &Curve, branches: &[Branch]) -> Result<(usize, usize, usize), String> {
    let ctx = &c.ctx;
    let (mut rational, mut higher, mut ordered) = (0, 0, 0);
    for p in &c.tested {
        let cf = closed_form_gaps(ctx, p)
            .map_err(|e| format!("{}: {p}: {e}", label(ctx)))?
            .ok_or_else(|| format!("{}: {p}: no closed form", label(ctx)))?;
        ensure(branches.contains(&cf.branch), || {
            format!("{}: {p}: unexpected branch {:?}", label(ctx), cf.branch)
        })?;
        let oracle = gap_set_oracle(ctx, p, None).map_err(|e| format!("{}: {p}: {e}", label(ctx)))?;
        ensure(cf.gaps == oracle, || {
            format!(
                "{}: {p}: closed form {:?}, oracle {:?}",
                label(ctx),
                cf.gaps.gaps(),
                oracle.gaps()
            )
        })?;
        if p.is_rational() {
            rational += 1;
        } else {
            higher += 1;
        }
        if cf.branch == Branch::ThirdOrdered {
            ordered += 1;
        }
    }
    ensure(higher >= 5, || format!("{}: only {higher} degree-2 places", label(ctx)))?;
    Ok((rational, higher, ordered))
}

fn criterion_1() -> Outcome {
    let mut parts = Vec::new();
    for c in &curves()[..4] {
        let (r, h, _) = theorem_vs_oracle(c, &[Branch::Half])?;
        parts.push(format!("{}: {r} rational + {h} degree-2", label(&c.ctx)));
    }
    Ok(parts.join("; "))
}

fn criterion_2() -> Outcome {
    let mut parts = Vec::new();
    for c in &curves()[4..] {
        let (r, h, ordered) = theorem_vs_oracle(c, &[Branch::ThirdGeneric, Branch::ThirdOrdered])?;
        let found = if ordered > 0 {
            format!("{ordered} with finite P-order <= m-2, branch exercised")
        } else {
            "no place with finite P-order <= m-2 found".to_string()
        };
        parts.push(format!("{}: {r} rational + {h} degree-2, {found}", label(&c.ctx)));
    }
    Ok(parts.join("; "))
}

fn criterion_3() -> Outcome {
    let mut total = 0;
    for c in curves() {
        let g = c.ctx.genus() as usize;
        ensure(g == ((c.ctx.m() - 1) * (c.ctx.m() - 2) / 2) as usize, || "genus formula".into())?;
        for p in &c.tested {
            let oracle = gap_set_oracle(&c.ctx, p, None).map_err(|e| e.to_string())?;
            let cf = closed_form_gaps(&c.ctx, p)
                .map_err(|e| e.to_string())?
                .expect("closed form applies");
            ensure(oracle.len() == g && cf.gaps.len() == g, || {
                format!("{}: {p}: {} / {} gaps, g = {g}", label(&c.ctx), oracle.len(), cf.gaps.len())
            })?;
            total += 1;
        }
    }
    Ok(format!("{total} places over 8 curves have exactly g gaps"))
}

fn criterion_4() -> Outcome {
    let mut parts = Vec::new();
    for c in curves() {
        let m = c.ctx.m();
        let expected = GapSet::new(c.ctx.genus(), gaps_of_generated(&[m - 1, m]));
        let o = c.ctx.o_places();
        ensure(o.len() as u64 == 3 * m, || "|O| != 3m".into())?;
        for p in &o {
            let g = gap_set_oracle(&c.ctx, p, None).map_err(|e| e.to_string())?;
            ensure(g == expected, || {
                format!("{}: {p}: oracle {:?}, <m-1, m> gives {:?}", label(&c.ctx), g.gaps(), expected.gaps())
            })?;
        }
        parts.push(format!("{}: {:?}", label(&c.ctx), expected.gaps()));
    }
    Ok(format!("all 3m places of O; {}", parts.join("; ")))
}

fn criterion_5() -> Outcome {
    const PLACES: usize = 10;
    const PRECISION: usize = 8;
    let mut count = 0;
    for c in curves() {
        let ctx = &c.ctx;
        let f = ctx.base();
        let q = ctx.q();
        let r = (q + 1) / ctx.m();
        let samples = sample_hermitian_places(ctx, PLACES, SEED).map_err(|e| e.to_string())?;
        for (place, big_a, big_b) in samples {
            let f0 = f0_tilde_expansion(ctx, &f, big_a, big_b, PRECISION).map_err(|e| e.to_string())?;
            ensure(f0.series.valuation() == Valuation::Exact(2), || {
                format!("{}: {place}: valuation {:?}", label(ctx), f0.series.valuation())
            })?;
            // coefficient of (U - A)^2, the series being in T = (U - A)/A
            let leading = f
                .div(f0.series.coeff(2).expect("precision > 2"), f.square(big_a))
                .map_err(|e| e.to_string())?;
            let binom = f.from_int((r * (r - 1) / 2) as i64);
            let predicted = f.neg(
                f.div(
                    f.mul(binom, f.pow(big_a, q - 1)),
                    f.pow(big_b, q + 1),
                )
                .map_err(|e| e.to_string())?,
            );
            ensure(leading == predicted && !leading.is_zero(), || {
                format!("{}: {place}: leading coefficient differs from -C(r,2) A^(q-1)/B^(q+1)", label(ctx))
            })?;
            if 3 * ctx.m() == q + 1 {
                // X = U^3 with U = A(1 + T)
                let u = TruncSeries::var(&f, PRECISION)
                    .add_constant(&f, f.one())
                    .and_then(|s| s.scale(&f, big_a))
                    .map_err(|e| e.to_string())?;
                let a = f.pow(big_a, 3);
                let lhs = u
                    .pow(&f, 3)
                    .and_then(|x| x.add_constant(&f, f.neg(a)))
                    .and_then(|x| x.scale(&f, f.inv(a).expect("a != 0")))
                    .map_err(|e| e.to_string())?;
                let mut want = vec![f.zero(); PRECISION];
                want[1] = f.from_int(3);
                want[2] = f.from_int(3);
                want[3] = f.one();
                ensure(lhs.coeffs() == want.as_slice(), || {
                    format!("{}: {place}: (X-a)/a != 3T + 3T^2 + T^3", label(ctx))
                })?;
                let h = hermitian_expand(ctx, &f, big_a, big_b, PRECISION).map_err(|e| e.to_string())?;
                ensure(h.x_rel.coeffs() == want.as_slice(), || {
                    format!("{}: {place}: library x_rel differs", label(ctx))
                })?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} Hermitian-lifted rational places, valuation 2 and predicted leading term"))
}

fn criterion_6() -> Outcome {
    let mut fields = Vec::new();
    for c in curves() {
        let ctx = &c.ctx;
        let Some(_) = ctx.zeta_3() else {
            fields.push(format!("F_{}^2 skipped (no cube root of unity)", ctx.q()));
            continue;
        };
        let f = ctx.base();
        let ints = |ks: &[i64]| poly::trimmed(&ks.iter().map(|&k| f.from_int(k)).collect::<Vec<_>>());
        for i in 1..=10u64 {
            let pq = pq_polynomials(ctx, i).map_err(|e| e.to_string())?;
            let qp = pq.q_poly.expect("i >= 1");
            let dp = poly::degree(&pq.p_poly).ok_or_else(|| format!("P_{i} = 0"))?;
            ensure(dp as u64 <= 3 * i - 3, || format!("F_{}^2: deg P_{i} = {dp}", ctx.q()))?;
            ensure(poly::degree(&qp) == Some((3 * i - 2) as usize), || {
                format!("F_{}^2: deg Q_{i} = {:?}", ctx.q(), poly::degree(&qp))
            })?;
            let g = poly::gcd(&f, &pq.p_poly, &qp);
            ensure(poly::degree(&g) == Some(0), || format!("F_{}^2: gcd(P_{i}, Q_{i}) != 1", ctx.q()))?;
            match i {
                1 => ensure(pq.p_poly == ints(&[1]) && qp == ints(&[1, 1]), || "P_1, Q_1".into())?,
                2 => ensure(
                    pq.p_poly == ints(&[2, -3, -3, 2]) && qp == ints(&[1, 1, -9, 1, 1]),
                    || format!("F_{}^2: P_2, Q_2", ctx.q()),
                )?,
                _ => {}
            }
        }
        fields.push(format!("F_{}^2", ctx.q()));
    }
    Ok(format!("i <= 10 over {}", fields.join(", ")))
}

fn criterion_7() -> Outcome {
    let ctx = make_curve(17, 1, 6).map_err(|e| e.to_string())?;
    let m = ctx.m();
    let f = ctx.base();
    let places: Vec<Place> = enumerate_places(&ctx, 1)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|p| !p.in_o())
        .collect();
    let mut ordered = 0;
    for p in &places {
        let alpha = fermat_ws::curve::alpha_invariant(&ctx, p).map_err(|e| e.to_string())?;
        let order = fermat_ws::theorems::p_order(&ctx, &f, alpha).map_err(|e| e.to_string())?;
        let j_top = match order {
            POrder::Finite(i) => (i - 1).min(m - 2),
            POrder::Infinite => m - 2,
        };
        for j in 0..=j_top {
            let spectrum = rr_valuation_spectrum(&ctx, p, j + 1).map_err(|e| e.to_string())?;
            ensure(spectrum.contains(&(3 * j + 2)), || {
                format!("{p}: spectrum at n = {} lacks {}", j + 1, 3 * j + 2)
            })?;
        }
        if let POrder::Finite(i) = order {
            if i <= m - 2 {
                let spectrum = rr_valuation_spectrum(&ctx, p, i + 1).map_err(|e| e.to_string())?;
                ensure(spectrum.contains(&(3 * i + 3)), || {
                    format!("{p}: spectrum at n = {} lacks {}", i + 1, 3 * i + 3)
                })?;
                ordered += 1;
            }
        }
    }
    Ok(format!(
        "q=17 m=6: {} rational places, {ordered} with P-order <= m-2",
        places.len()
    ))
}

fn criterion_8() -> Outcome {
    for n in 0..=10_000 {
        ensure(Identity::FloorSum { n }.holds() == Ok(true), || format!("floor sum n = {n}"))?;
    }
    for q in (5..=101).step_by(2) {
        ensure(Identity::HalfIndexSet { q }.holds() == Ok(true), || format!("half index set q = {q}"))?;
    }
    let mut third = 0;
    for m in 2..=50u64 {
        let q = 3 * m - 1;
        for stride in [q, q + 1] {
            for order in (1..=m).map(POrder::Finite).chain([POrder::Infinite]) {
                let id = Identity::ThirdGapCount { m, stride, order };
                ensure(id.holds() == Ok(true), || format!("{id:?}"))?;
                third += 1;
            }
        }
    }
    Ok(format!(
        "floor sums n <= 10^4, half index sets odd 5 <= q <= 101, {third} third-case enumerations"
    ))
}

fn brute_projective_count(ctx: &CurveCtx) -> u64 {
    let f = ctx.base();
    let m = ctx.m();
    let powers: Vec<_> = f.elements().map(|x| f.pow(x, m)).collect();
    let mut counts = std::collections::HashMap::new();
    for &u in &powers {
        *counts.entry(u).or_insert(0u64) += 1;
    }
    let minus_one = f.neg(f.one());
    // affine points, including the axes, plus m points at infinity
    let affine: u64 = powers
        .iter()
        .map(|&u| counts.get(&f.sub(minus_one, u)).copied().unwrap_or(0))
        .sum();
    affine + m
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    for c in curves() {
        let ctx = &c.ctx;
        let q = ctx.q();
        let expected = q * q + 1 + 2 * q * ctx.genus();
        let census = rational_place_census(ctx).map_err(|e| e.to_string())?;
        let brute = brute_projective_count(ctx);
        ensure(census == expected && brute == expected, || {
            format!("{}: census {census}, exhaustive {brute}, bound {expected}", label(ctx))
        })?;
        parts.push(format!("{}: {census}", label(ctx)));
    }
    Ok(parts.join(", "))
}

fn same_action(ctx: &CurveCtx, places: &[Place], w1: &AutWord, w2: &AutWord) -> Result<(), String> {
    for p in places {
        let a = apply_automorphism(ctx, w1, p).map_err(|e| e.to_string())?;
        let b = apply_automorphism(ctx, w2, p).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{}: {w1} and {w2} differ at {p}", label(ctx)))?;
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    use AutGen::{A, S, T};
    let w = |gs: &[AutGen]| AutWord(gs.to_vec());
    let mut orbit_checks = 0;
    for c in curves() {
        let ctx = &c.ctx;
        let m = ctx.m();
        let neg = |a: u64| (m - a % m) % m;
        let mut places = ctx.o_places();
        places.extend(c.tested.iter().step_by(7).copied());
        places.extend(c.tested.iter().filter(|p| !p.is_rational()).copied());
        let id = AutWord::identity();
        same_action(ctx, &places, &w(&[S, S, S]), &id)?;
        same_action(ctx, &places, &w(&[T, T]), &id)?;
        // T^{-1} S T = S^{-1}, with T^{-1} = T and S^{-1} = S S
        same_action(ctx, &places, &w(&[T, S, T]), &w(&[S, S]))?;
        for a in 0..m {
            for b in 0..m {
                same_action(ctx, &places, &w(&[S, S, A(a, b), S]), &w(&[A((b + neg(a)) % m, neg(a))]))?;
                same_action(ctx, &places, &w(&[T, A(a, b), T]), &w(&[A(neg(a), (b + neg(a)) % m)]))?;
            }
        }
        let o: HashSet<Place> = ctx.o_places().into_iter().collect();
        let orb = orbit(ctx, &Place::AxisX(1), &standard_generators()).map_err(|e| e.to_string())?;
        ensure(orb.len() as u64 == 3 * m && orb.iter().all(|p| o.contains(p)), || {
            format!("{}: orbit of axis_x:1 has {} places", label(ctx), orb.len())
        })?;
        // gap sets along sampled orbits
        for start in c.tested.iter().step_by(c.tested.len() / 3 + 1).take(3) {
            let orb = orbit(ctx, start, &standard_generators()).map_err(|e| e.to_string())?;
            let base = gap_set_oracle(ctx, start, None).map_err(|e| e.to_string())?;
            for p in orb.iter().step_by(orb.len() / 8 + 1) {
                let g = gap_set_oracle(ctx, p, None).map_err(|e| e.to_string())?;
                ensure(g == base, || format!("{}: gaps at {p} differ from {start}", label(ctx)))?;
                orbit_checks += 1;
            }
        }
    }
    Ok(format!(
        "group relations on O and sampled places of 8 curves; orbit(axis_x:1) = O; {orbit_checks} orbit gap checks"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("theorem/oracle equality, m=(q+1)/2 (exact)", criterion_1),
        ("theorem/oracle equality, m=(q+1)/3 (exact)", criterion_2),
        ("every tested place has g gaps (exact)", criterion_3),
        ("O places have the gaps of <m-1, m> (exact)", criterion_4),
        ("f0 expansion at Hermitian points (exact)", criterion_5),
        ("P_i/Q_i family, i <= 10 (exact)", criterion_6),
        ("spectra at q=17, m=6 (exact)", criterion_7),
        ("counting identities (exact)", criterion_8),
        ("maximality census (exact)", criterion_9),
        ("automorphism suite (exact)", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {} [{name}]: PASS in {secs:.2}s - {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL in {secs:.2}s - {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
