//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit status on any failure.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use latdec::algebra::families::*;
use latdec::algebra::{
    check_l_eq_lstar, check_l_eq_r, check_nd, check_positive_involution, check_ss, Involution,
    InvolutiveOrder,
};
use latdec::aut::{aut_group, block_permutation, verify_aut_factorization};
use latdec::hermitian::{decompose_hermitian, trace_form, HermitianModule};
use latdec::hodge::{cm_curve, decompose_hodge, verify_round_trip, PolarisedComplexStructure};
use latdec::idempotent::{blocks_from_idempotents, decompose_unity, idempotents_from_blocks};
use latdec::lattice::{decompose, is_indecomposable, ZLattice};
use latdec::linalg::matrix::{int_vec, rat_int};
use latdec::linalg::{enumerate_short_vectors, IntMatrix};
use num::BigInt;
use rand::Rng;

const PLANTED_INSTANCES: usize = 200;
const PLANTED_MAX_RANK: usize = 6;
const PLANTED_TIME_LIMIT: Duration = Duration::from_secs(120);
const REPRESENTATION_INSTANCES: usize = 100;
const MIN_TRACE_ALGEBRAS: usize = 200;
const FUZZED_ORDERS: usize = 50;
const FUZZED_AUT_LATTICES: usize = 20;
const E8_TIME_LIMIT: Duration = Duration::from_secs(10);
const UNIMODULAR_BOUND: i64 = 3;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn planted_recovery() -> Outcome {
    let mut rng = rng(0x5eed_0001);
    let start = Instant::now();
    let mut hits = 0;
    for k in 0..PLANTED_INSTANCES {
        let p = random_planted(&mut rng, PLANTED_MAX_RANK);
        let u = random_unimodular(&mut rng, p.gram.rows(), UNIMODULAR_BOUND);
        let (l, expected) = conjugated(&p, &u);
        let d = decompose(&l).map_err(|e| format!("instance {k}: {e}"))?;
        let mut got = d.spans();
        sort_spans(&mut got);
        if got == expected {
            hits += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(hits == PLANTED_INSTANCES, || format!("{hits}/{PLANTED_INSTANCES} recovered"))?;
    ensure(elapsed < PLANTED_TIME_LIMIT, || format!("took {elapsed:.1?}"))?;
    Ok(format!("{hits}/{PLANTED_INSTANCES} recovered in {elapsed:.2?}"))
}

fn representation_uniqueness() -> Outcome {
    let mut rng = rng(0x5eed_0002);
    let mut hits = 0;
    for k in 0..REPRESENTATION_INSTANCES {
        let p = random_planted(&mut rng, PLANTED_MAX_RANK);
        let n = p.gram.rows();
        let u0 = random_unimodular(&mut rng, n, UNIMODULAR_BOUND);
        let (l, _) = conjugated(&p, &u0);
        let u = random_unimodular(&mut rng, n, UNIMODULAR_BOUND);
        let l2 = l.rebased(&u).map_err(|e| e.to_string())?;
        let mut d1 = decompose(&l).map_err(|e| format!("instance {k}: {e}"))?.spans();
        sort_spans(&mut d1);
        let d2 = decompose(&l2).map_err(|e| format!("instance {k}: {e}"))?.spans();
        if transport(&d2, &u) == d1 {
            hits += 1;
        }
    }
    ensure(hits == REPRESENTATION_INSTANCES, || {
        format!("{hits}/{REPRESENTATION_INSTANCES} identical block sets")
    })?;
    Ok(format!("{hits}/{REPRESENTATION_INSTANCES} identical block sets"))
}

/// Curated algebras with the expected semisimplicity and positivity of the involution.
fn curated_algebras() -> Vec<(String, InvolutiveOrder, bool, bool)> {
    let z = rationals;
    let identity_inv = |o: InvolutiveOrder| {
        let a = o.algebra().clone();
        let s = Involution::identity(&a).unwrap();
        InvolutiveOrder::new(a, s).unwrap()
    };
    let mut out: Vec<(String, InvolutiveOrder, bool, bool)> = vec![
        ("Z".into(), z(), true, true),
        ("Z[i]".into(), gaussian_integers(), true, true),
        ("Z[i] trivial involution".into(), identity_inv(gaussian_integers()), true, false),
        ("Z[sqrt-2]".into(), quadratic_order(-2, 0), true, true),
        ("Z[sqrt-5]".into(), quadratic_order(-5, 0), true, true),
        ("Z[w] w^2=w-1".into(), quadratic_order(-1, 1), true, true),
        ("Z[w] w^2=w-2".into(), quadratic_order(-2, 1), true, true),
        ("Z[sqrt2]".into(), quadratic_order(2, 0), true, false),
        ("Z[sqrt3]".into(), quadratic_order(3, 0), true, false),
        ("Z[golden]".into(), quadratic_order(1, 1), true, false),
        ("Z[w] w^2=1".into(), quadratic_order(1, 0), true, false),
        ("Z[w] w^2=w".into(), quadratic_order(0, 1), true, false),
        ("Z[e] e^2=0".into(), quadratic_order(0, 0), false, false),
        ("Z x Z swapped".into(), swap_involution(), true, false),
        ("M2(Z)".into(), matrix_order(2), true, true),
        ("M2(Z) x Z".into(), product(&[matrix_order(2), z()]), true, true),
        ("M2(Z) x Z x Z".into(), product(&[matrix_order(2), z(), z()]), true, true),
        ("M2(Z) x Z[i]".into(), product(&[matrix_order(2), gaussian_integers()]), true, true),
        ("T2".into(), upper_triangular(2), false, false),
        ("T3".into(), upper_triangular(3), false, false),
        ("T2 x Z".into(), product(&[upper_triangular(2), z()]), false, false),
        ("Z[C2xC2]".into(), group_ring(&klein_four_table()), true, true),
        ("Z[S3]".into(), group_ring(&s3_table()), true, true),
        ("Z[i] x Z[i]".into(), product(&[gaussian_integers(), gaussian_integers()]), true, true),
        ("Z[i] x Z[sqrt2]".into(), product(&[gaussian_integers(), quadratic_order(2, 0)]), true, false),
        ("Z[e] x Z[i]".into(), product(&[quadratic_order(0, 0), gaussian_integers()]), false, false),
    ];
    for k in 2..=6 {
        out.push((format!("Z^{k}"), product(&vec![z(); k]), true, true));
    }
    for k in 1..=6 {
        out.push((format!("Z[C{k}]"), group_ring(&cyclic_group_table(k)), true, true));
        out.push((format!("Z[C{k}] trivial involution"), identity_inv(group_ring(&cyclic_group_table(k))), true, k <= 2));
    }
    for k in 1..=6 {
        out.push((format!("Z[x]/(x^{k})"), truncated_polynomial(k), k == 1, k == 1));
    }
    out
}

fn trace_predicates() -> Outcome {
    // Upper triangular 2x2 on E11, E12, E22.
    let t2 = upper_triangular(2);
    let a = t2.algebra();
    let mut rng = rng(0x5eed_0003);
    for _ in 0..20 {
        let (a11, a12, a22): (i64, i64, i64) =
            (rng.gen_range(-9..=9), rng.gen_range(-9..=9), rng.gen_range(-9..=9));
        let x = vec![rat_int(a11), rat_int(a12), rat_int(a22)];
        ensure(a.left_trace(&x) == rat_int(2 * a11 + a22), || "T2 left trace".into())?;
        ensure(a.right_trace(&x) == rat_int(a11 + 2 * a22), || "T2 right trace".into())?;
    }
    ensure(!check_nd(a), || "T2 reported (nd)".into())?;
    let dual = truncated_polynomial(2);
    ensure(check_l_eq_r(dual.algebra()) && !check_nd(dual.algebra()), || {
        "Q[x]/(x^2) should satisfy (l=r) but not (nd)".into()
    })?;

    let mut checked = 0;
    for (name, o, ss, pd) in curated_algebras() {
        let mut variants = vec![o.clone()];
        for _ in 0..5 {
            let p = random_unimodular(&mut rng, o.dim(), 2);
            variants.push(base_change_order(&o, &p).map_err(|e| format!("{name}: {e}"))?);
        }
        for v in variants {
            let (a, s) = (v.algebra(), v.involution());
            let (nd, lr, pdv) = (check_nd(a), check_l_eq_r(a), check_positive_involution(a, s));
            ensure(!pdv || nd, || format!("{name}: (pd*) without (nd)"))?;
            ensure(!nd || lr, || format!("{name}: (nd) without (l=r)"))?;
            ensure(check_l_eq_lstar(a, s) == lr, || format!("{name}: (l=l*) differs from (l=r)"))?;
            ensure(check_ss(a) == nd, || format!("{name}: (ss) differs from (nd)"))?;
            ensure(nd == ss, || format!("{name}: (nd) = {nd}, expected {ss}"))?;
            ensure(pdv == pd, || format!("{name}: (pd*) = {pdv}, expected {pd}"))?;
            checked += 1;
        }
    }
    ensure(checked >= MIN_TRACE_ALGEBRAS, || format!("only {checked} algebras"))?;
    Ok(format!("T2 traces exact, chain holds on {checked} algebras"))
}

fn idempotents() -> Outcome {
    for n in 1..=3 {
        let r = matrix_order(n);
        let d = decompose_unity(&r).map_err(|e| format!("M{n}: {e}"))?;
        let expected: Vec<Vec<BigInt>> = (0..n)
            .map(|a| {
                let mut v = vec![BigInt::from(0); n * n];
                v[a * n + a] = BigInt::from(1);
                v
            })
            .collect();
        ensure(d.idems == expected, || format!("M{n}: got {:?}", d.idems))?;
    }
    let c3 = group_ring(&cyclic_group_table(3));
    let d = decompose_unity(&c3).map_err(|e| e.to_string())?;
    ensure(d.idems == vec![int_vec(&[1, 0, 0])], || format!("Z[C3]: got {:?}", d.idems))?;

    let orders = positive_orders();
    let mut rng = rng(0x5eed_0004);
    for k in 0..FUZZED_ORDERS {
        let (name, base) = &orders[k % orders.len()];
        let p = random_unimodular(&mut rng, base.dim(), 2);
        let r = base_change_order(base, &p).map_err(|e| format!("{name}: {e}"))?;
        let d = decompose_unity(&r).map_err(|e| format!("{name}: {e}"))?;
        let blocks = blocks_from_idempotents(&r, &d.idems).map_err(|e| format!("{name}: {e}"))?;
        let back = idempotents_from_blocks(&r, &blocks).map_err(|e| format!("{name}: {e}"))?;
        ensure(back == d, || format!("{name}: idempotents -> blocks -> idempotents"))?;
        let module = HermitianModule::regular(&r).map_err(|e| e.to_string())?;
        let hb = decompose_hermitian(&module).map_err(|e| e.to_string())?.spans();
        let from_hb = idempotents_from_blocks(&r, &hb).map_err(|e| format!("{name}: {e}"))?;
        let mut again = blocks_from_idempotents(&r, &from_hb.idems).map_err(|e| e.to_string())?;
        let mut hb_sorted = hb.clone();
        sort_spans(&mut again);
        sort_spans(&mut hb_sorted);
        ensure(again == hb_sorted, || format!("{name}: blocks -> idempotents -> blocks"))?;

        let perm = random_permutation(&mut rng, r.dim());
        let rp = base_change_order(&r, &perm).map_err(|e| e.to_string())?;
        let dp = decompose_unity(&rp).map_err(|e| format!("{name} permuted: {e}"))?;
        let mut moved: Vec<Vec<BigInt>> =
            dp.idems.iter().map(|i| to_original_coords(i, &perm)).collect();
        moved.sort_by(|a, b| b.cmp(a));
        ensure(moved == d.idems, || format!("{name}: not invariant under basis permutation"))?;
    }
    Ok(format!(
        "M1..M3 diagonal units, Z[C3] -> {{1}}, round trip and permutation invariance on {FUZZED_ORDERS} orders"
    ))
}

fn hermitian_separation() -> Outcome {
    let m = HermitianModule::regular(&gaussian_integers()).map_err(|e| e.to_string())?;
    let g = trace_form(&m);
    ensure(g == ZLattice::from_i64(&[&[2, 0], &[0, 2]]).unwrap(), || {
        format!("trace form {:?}", g.gram())
    })?;
    let h = decompose_hermitian(&m).map_err(|e| e.to_string())?;
    ensure(h.spans() == vec![IntMatrix::identity(2)], || format!("Hermitian blocks {:?}", h.spans()))?;
    let t = decompose(&g).map_err(|e| e.to_string())?;
    let expected = vec![IntMatrix::from_i64(&[&[0, 1]]), IntMatrix::from_i64(&[&[1, 0]])];
    ensure(t.spans() == expected, || format!("trace blocks {:?}", t.spans()))?;
    Ok("1 Hermitian block, 2 trace-form blocks".into())
}

fn automorphisms() -> Outcome {
    for n in 1..=4 {
        let l = ZLattice::from_matrix(latdec::linalg::RatMatrix::identity(n)).unwrap();
        let order = aut_group(&l).map_err(|e| e.to_string())?.order;
        let expected = BigInt::from(1u64 << n) * factorial(n);
        ensure(order == expected, || format!("|Aut(Z^{n})| = {order}, expected {expected}"))?;
    }
    let a2 = ZLattice::from_i64(&[&[2, 1], &[1, 2]]).unwrap();
    let o = aut_group(&a2).map_err(|e| e.to_string())?.order;
    ensure(o == BigInt::from(12), || format!("|Aut(A2)| = {o}"))?;
    let a2z = ZLattice::from_i64(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 2]]).unwrap();
    let o = aut_group(&a2z).map_err(|e| e.to_string())?.order;
    ensure(o == BigInt::from(24), || format!("|Aut(A2 + [2])| = {o}"))?;

    // Orders of the building blocks by brute force; distinct types are never isometric.
    let block_orders: Vec<BigInt> = block_types()
        .iter()
        .map(|g| BigInt::from(brute_force_aut_order(g, 2)))
        .collect();
    let mut rng = rng(0x5eed_0006);
    for k in 0..FUZZED_AUT_LATTICES {
        let p = random_planted(&mut rng, PLANTED_MAX_RANK);
        let u = random_unimodular(&mut rng, p.gram.rows(), UNIMODULAR_BOUND);
        let (l, _) = conjugated(&p, &u);
        let report = verify_aut_factorization(&l).map_err(|e| format!("lattice {k}: {e}"))?;
        ensure(report.ok(), || format!("lattice {k}: factorization check failed"))?;
        let mut expected = BigInt::from(1);
        for (t, a) in block_orders.iter().enumerate() {
            let e = p.types.iter().filter(|&&x| x == t).count();
            expected *= num::pow(a.clone(), e) * factorial(e);
        }
        ensure(report.group.order == expected, || {
            format!("lattice {k}: |Aut| = {}, expected {expected}", report.group.order)
        })?;
        for g in &report.group.generators {
            ensure(block_permutation(&report.blocks, g).is_some(), || {
                format!("lattice {k}: generator does not permute the blocks")
            })?;
        }
    }
    Ok(format!("Z^1..Z^4, A2, A2+[2] exact; {FUZZED_AUT_LATTICES} fuzzed factorizations hold"))
}

fn hodge() -> Outcome {
    let mut inputs: Vec<(String, PolarisedComplexStructure)> = Vec::new();
    let single = cm_curve(1);
    let d = decompose_hodge(&single).map_err(|e| e.to_string())?;
    ensure(d.len() == 1, || format!("single curve: {} blocks", d.len()))?;
    inputs.push(("E".into(), single.clone()));

    let two = PolarisedComplexStructure::product(&[cm_curve(1), cm_curve(2)]).map_err(|e| e.to_string())?;
    let d = decompose_hodge(&two).map_err(|e| e.to_string())?;
    let planes: BTreeSet<Vec<BigInt>> = d.spans().iter().map(|s| s.entries().to_vec()).collect();
    let expected: BTreeSet<Vec<BigInt>> = [
        IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]),
        IntMatrix::from_i64(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]),
    ]
    .iter()
    .map(|s| s.entries().to_vec())
    .collect();
    ensure(planes == expected, || format!("two curves: {:?}", d.spans()))?;
    inputs.push(("E_i x E_2i".into(), two));

    let exe = PolarisedComplexStructure::product(&[cm_curve(1), cm_curve(1)]).map_err(|e| e.to_string())?;
    let d = decompose_hodge(&exe).map_err(|e| e.to_string())?;
    ensure(d.len() == 2, || format!("E x E: {} blocks", d.len()))?;
    let mut reference = d.spans();
    sort_spans(&mut reference);
    let mut rng = rng(0x5eed_0007);
    for k in 0..6 {
        let p = if k < 3 {
            random_permutation(&mut rng, 4)
        } else {
            random_unimodular(&mut rng, 4, 2)
        };
        let shuffled = exe.rebased(&p).map_err(|e| e.to_string())?;
        let ds = decompose_hodge(&shuffled).map_err(|e| format!("shuffle {k}: {e}"))?;
        ensure(transport(&ds.spans(), &p) == reference, || format!("E x E shuffle {k}: blocks moved"))?;
        inputs.push((format!("E x E shuffle {k}"), shuffled));
    }
    inputs.push(("E x E".into(), exe));

    for (name, h) in &inputs {
        let d = decompose_hodge(h).map_err(|e| format!("{name}: {e}"))?;
        ensure(verify_round_trip(h, &d).map_err(|e| format!("{name}: {e}"))?, || {
            format!("{name}: round trip failed")
        })?;
    }
    Ok(format!("two curves -> 2 planes, E -> 1 block, E x E -> 2 blocks; round trip on {} inputs", inputs.len()))
}

fn e8() -> Outcome {
    let start = Instant::now();
    let cartan = e8_cartan();
    let simple = e8_simple_roots_doubled();
    // The Gram of the simple roots (doubled coordinates give 4x the inner product).
    for i in 0..8 {
        for j in 0..8 {
            let ip: i64 = (0..8).map(|k| simple[i][k] * simple[j][k]).sum();
            ensure(rat_int(ip) == cartan[(i, j)].clone() * rat_int(4), || {
                "simple roots do not match the Cartan matrix".into()
            })?;
        }
    }
    let l = ZLattice::from_matrix(cartan).map_err(|e| e.to_string())?;
    ensure(is_indecomposable(&l).map_err(|e| e.to_string())?, || "E8 reported decomposable".into())?;
    let short = enumerate_short_vectors(l.gram(), &rat_int(2)).map_err(|e| e.to_string())?;
    ensure(short.len() == 120, || format!("{} pairs at bound 2", short.len()))?;

    let oracle: BTreeSet<[i64; 8]> = e8_roots_doubled().into_iter().collect();
    ensure(oracle.len() == 240, || format!("oracle found {} roots", oracle.len()))?;
    let mut found = BTreeSet::new();
    for v in &short {
        let mut img = [0i64; 8];
        for (i, c) in v.coords.iter().enumerate() {
            let c: i64 = c.try_into().map_err(|_| "coordinate overflow".to_string())?;
            for k in 0..8 {
                img[k] += c * simple[i][k];
            }
        }
        found.insert(img);
        found.insert(img.map(|x| -x));
    }
    ensure(found == oracle, || "enumerated vectors differ from the root system".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < E8_TIME_LIMIT, || format!("took {elapsed:.1?}"))?;
    Ok(format!("indecomposable, 120 pairs matching all 240 roots in {elapsed:.2?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("planted-decomposition recovery", planted_recovery),
        ("uniqueness under re-presentation", representation_uniqueness),
        ("trace predicates", trace_predicates),
        ("idempotent decompositions", idempotents),
        ("Hermitian vs trace-form blocks", hermitian_separation),
        ("automorphism factorization", automorphisms),
        ("Hodge decomposition", hodge),
        ("E8 sanity", e8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
