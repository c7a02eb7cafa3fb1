//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use bolmoufang_core::construction::{
    g0_shift_map, g0_shifted, loop_criterion_on, star_coset_map, star_reduced, BETA_PAIRS, GAMMA_PAIRS,
};
use bolmoufang_core::term::builtin_names;
use bolmoufang_core::*;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn inverse_star(desc: &str) -> StarredGroup {
    StarredGroup::with_inversion(FiniteGroup::from_descriptor(desc).expect("named group"))
}

/// Brute-force memberships: `[member][cell][builtin]`.
struct Memberships {
    names: Vec<&'static str>,
    grid: Vec<MultQuadruple>,
    table: Vec<Vec<Vec<bool>>>,
}

impl Memberships {
    fn compute(battery: &WitnessBattery) -> Memberships {
        let names: Vec<&'static str> = builtin_names().collect();
        let psis: Vec<LoopIdentity> = names.iter().map(|n| builtin(n).expect("builtin")).collect();
        let grid = enumerate_quadruples();
        let table = battery
            .members()
            .par_iter()
            .map(|m| {
                grid.iter()
                    .map(|quad| {
                        let t = build_loop(&m.starred, quad);
                        psis.iter().map(|psi| check_identity(&t, psi)).collect()
                    })
                    .collect()
            })
            .collect();
        Memberships { names, grid, table }
    }

    fn get(&self, member: usize, cell: usize, name: &str) -> bool {
        let k = self.names.iter().position(|n| *n == name).expect("known builtin");
        self.table[member][cell][k]
    }
}

fn golden_reproduction() -> Outcome {
    let classifier = Classifier::default();
    let results = run_search(VARIETIES, &classifier).map_err(|e| e.to_string())?;
    let report = diff_against_golden(&results, &GoldenSet::standard(), classifier.battery(), false)
        .map_err(|e| e.to_string())?;
    ensure(report.rows.len() == 15 * 64, || format!("{} cells", report.rows.len()))?;
    let bad: Vec<String> =
        report.mismatches().map(|r| format!("{} {}: {} vs {}", r.variety, r.quadruple, r.computed, r.golden)).collect();
    ensure(bad.is_empty(), || format!("{} mismatches, first: {}", bad.len(), bad[0]))?;
    Ok(format!("{} cells, 0 mismatches", report.rows.len()))
}

fn chein_construction() -> Outcome {
    let m = build_loop(&inverse_star("symmetric:3"), &MultQuadruple::chein());
    ensure(m.order() == 12, || format!("order {}", m.order()))?;
    ensure(is_loop(&m), || "M(S3) is not a loop".into())?;
    ensure(check_identity(&m, &builtin("moufang").unwrap()), || "M(S3) is not Moufang".into())?;
    ensure(!check_identity(&m, &builtin("assoc").unwrap()), || "M(S3) is associative".into())?;
    let c4 = build_loop(&inverse_star("cyclic:4"), &MultQuadruple::chein());
    ensure(check_identity(&c4, &builtin("assoc").unwrap()), || "M(C4) is not associative".into())?;
    Ok("M(S3): order 12, Moufang, not associative; M(C4) associative".into())
}

fn dbj_construction(battery: &WitnessBattery) -> Outcome {
    let [flex, c, assoc, mou] = ["flexible", "c", "assoc", "moufang"].map(|n| builtin(n).unwrap());
    let mut c_loops = 0;
    for m in battery.members() {
        let t = build_loop(&m.starred, &MultQuadruple::dbj());
        let label = m.label();
        ensure(check_identity(&t, &flex), || format!("not flexible on {label}"))?;
        let is_c = check_identity(&t, &c);
        ensure(is_c == m.signature.pb, || format!("C-loop = {is_c} but PB = {} on {label}", m.signature.pb))?;
        let (a, mo) = (check_identity(&t, &assoc), check_identity(&t, &mou));
        ensure(a == mo && mo == m.signature.pc, || {
            format!("assoc {a}, moufang {mo}, PC {} on {label}", m.signature.pc)
        })?;
        if is_c {
            ensure(is_diassociative(&t), || format!("C-loop on {label} is not diassociative"))?;
            c_loops += 1;
        }
    }
    Ok(format!("{} members, {c_loops} C-loops, all diassociative", battery.len()))
}

fn master_oracle(battery: &WitnessBattery, brute: &Memberships) -> Outcome {
    let classifier = Classifier::new(battery);
    let results = run_search(&brute.names, &classifier).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for (k, res) in results.iter().enumerate() {
        for (cell, (quad, cond)) in res.cells.iter().enumerate() {
            debug_assert_eq!(*quad, brute.grid[cell]);
            for (mi, m) in battery.members().iter().enumerate() {
                let expected = brute.table[mi][cell][k];
                ensure(condition_holds(cond, &m.starred) == expected, || {
                    format!("{} at {quad} on {}: brute force {expected}, classified {cond}", res.variety, m.label())
                })?;
                checked += 1;
            }
        }
    }
    ensure(battery.len() >= 5 && checked >= 5120, || format!("only {checked} agreements"))?;
    Ok(format!("{checked} agreements ({} members x 64 x {})", battery.len(), brute.names.len()))
}

fn reduction_isomorphisms(battery: &WitnessBattery) -> Outcome {
    let grid = enumerate_quadruples();
    let shifted: Vec<&Witness> = battery.members().iter().filter(|m| m.starred.g0() != 0).collect();
    ensure(shifted.len() >= 2, || "fewer than two members with nontrivial g0".into())?;
    let d4 = shifted.iter().find(|m| m.descriptor == "dihedral:4").ok_or("no D4 member with g0 != 1")?;
    ensure(d4.starred.group().element_order(d4.starred.g0()) == 2, || "D4 g0 is not of order 2".into())?;
    let mut checks = 0;
    for m in &shifted {
        for quad in &grid {
            for n in [1, 2] {
                let a = build_loop(&m.starred, quad);
                let b = build_loop(&m.starred, &g0_shifted(quad, n));
                ensure(check_isomorphism(&a, &b, &g0_shift_map(&m.starred, n as i64)) == Ok(true), || {
                    format!("g0 shift n={n} fails at {quad} on {}", m.label())
                })?;
                checks += 1;
            }
        }
    }
    for m in battery.members() {
        for quad in &grid {
            let t = build_loop(&m.starred, quad);
            ensure(opposite(&t).table() == build_loop(&m.starred, &quad.opposite()).table(), || {
                format!("opposite fails at {quad} on {}", m.label())
            })?;
            checks += 1;
        }
    }
    let targets: Vec<&Witness> = battery.members().iter().filter(|m| !m.signature.pc).take(3).collect();
    ensure(targets.len() >= 2, || "fewer than two noncommutative members".into())?;
    for m in targets {
        let map = star_coset_map(&m.starred);
        for (b, b2) in BETA_PAIRS {
            for (c, c2) in GAMMA_PAIRS {
                for d in ThetaElem::all_parts() {
                    let quad = MultQuadruple::triple(b, c, d.with_g0(1));
                    let x = build_loop(&m.starred, &quad);
                    let y = build_loop(&m.starred, &star_reduced(&quad, b2, c2));
                    ensure(check_isomorphism(&x, &y, &map) == Ok(true), || {
                        format!("star map fails at {quad} on {}", m.label())
                    })?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} explicit isomorphisms verified"))
}

fn loop_criterion() -> Outcome {
    let sg = inverse_star("cyclic:4");
    let mut loops = 0;
    let mut total = 0;
    for a in ThetaElem::all_parts() {
        for b in ThetaElem::all_parts() {
            for c in ThetaElem::all_parts() {
                for d in ThetaElem::all_parts() {
                    for e in [0, 1] {
                        let quad = MultQuadruple::new(a, b, c, d.with_g0(e));
                        let is = is_loop(&build_loop(&sg, &quad));
                        ensure(is == loop_criterion_on(&sg, &quad), || format!("disagreement at {quad}"))?;
                        loops += is as usize;
                        total += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{total} quadruples, {loops} loops, criterion exact"))
}

fn structural_properties(battery: &WitnessBattery) -> Outcome {
    // Θ is dihedral of order 8.
    let mut theta: BTreeSet<ThetaElem> = [ThetaElem::XY].into();
    loop {
        let next: BTreeSet<ThetaElem> = theta
            .iter()
            .flat_map(|&t| [t.compose(ThetaElem::YX), t.compose(ThetaElem::XY_)])
            .chain(theta.iter().copied())
            .collect();
        if next.len() == theta.len() {
            break;
        }
        theta = next;
    }
    ensure(theta.len() == 8, || format!("generated {} maps", theta.len()))?;
    let order = |t: ThetaElem| (1..=8).find(|&k| (1..k).fold(t, |acc, _| acc.compose(t)).is_identity()).unwrap();
    let involutions = theta.iter().filter(|&&t| order(t) == 2).count();
    let fours = theta.iter().filter(|&&t| order(t) == 4).count();
    ensure(involutions == 5 && fours == 2, || format!("{involutions} involutions, {fours} of order 4"))?;
    ensure(ThetaElem::YX.compose(ThetaElem::XY_) != ThetaElem::XY_.compose(ThetaElem::YX), || "abelian".into())?;

    // g*g = gg* for every star of several groups.
    for desc in ["symmetric:3", "dihedral:4", "quaternion:8", "cyclic:2xcyclic:2xcyclic:2", "modular:16"] {
        let g = FiniteGroup::from_descriptor(desc).unwrap();
        for star in enumerate_star_maps(&g) {
            ensure(g.elements().all(|x| g.mul(star.apply(x), x) == g.mul(x, star.apply(x))), || {
                format!("norms differ on {desc}")
            })?;
        }
    }

    // Both sides of a balanced identity use the Gu-product equally often.
    for name in builtin_names() {
        let psi = builtin(name).unwrap();
        for f in CosetAssignment::all(psi.vars()) {
            let k = psi.lhs.leaves().iter().filter(|&&v| f.get(v) == Coset::Gu).count();
            let (l, r) = (delta_usage(&psi.lhs, &f), delta_usage(&psi.rhs, &f));
            ensure(l == r && l == k / 2, || format!("{name} under {f}: {l} vs {r}"))?;
        }
    }

    // A loop with α ∈ Θ has neutral element 0.
    for sg in [inverse_star("cyclic:4"), inverse_star("dihedral:4")] {
        for a in ThetaElem::all_parts() {
            for b in ThetaElem::all_parts() {
                for c in ThetaElem::all_parts() {
                    let t = build_loop(&sg, &MultQuadruple::new(a, b, c, ThetaElem::XY.with_g0(1)));
                    let neutral: Vec<Elem> = (0..t.order())
                        .filter(|&e| (0..t.order()).all(|x| t.mul(e, x) == x && t.mul(x, e) == x))
                        .collect();
                    ensure(neutral.is_empty() || neutral == [0], || format!("neutral {neutral:?}"))?;
                }
            }
        }
    }

    // Identical star: every loop is an abelian group.
    let v4 = Arc::new(FiniteGroup::from_descriptor("cyclic:2xcyclic:2").unwrap());
    let ident = StarMap::identity_map(&v4).unwrap();
    let comm = parse_identity("xy=yx").unwrap();
    let psis: Vec<LoopIdentity> = builtin_names().map(|n| builtin(n).unwrap()).collect();
    for g0 in v4.elements() {
        let sg = StarredGroup::new(v4.clone(), ident.clone(), g0).unwrap();
        for quad in enumerate_quadruples() {
            let t = build_loop(&sg, &quad);
            ensure(is_loop(&t) && check_identity(&t, &comm), || format!("{quad} g0={g0} not abelian"))?;
            ensure(psis.iter().all(|p| check_identity(&t, p)), || format!("{quad} g0={g0} misses an identity"))?;
        }
    }

    // Two-sided inverses everywhere.
    let mut members = 0;
    for m in battery.members() {
        for quad in enumerate_quadruples() {
            ensure(has_two_sided_inverses(&build_loop(&m.starred, &quad)), || {
                format!("no inverses at {quad} on {}", m.label())
            })?;
        }
        members += 1;
    }
    Ok(format!(
        "Θ dihedral of order 8; norms, Gu-counts, neutral element, identical star, inverses on {members} members"
    ))
}

/// Inclusions between varieties of loops, as (smaller, larger).
const INCLUSIONS: &[(&str, &str)] = &[
    ("assoc", "extra"),
    ("extra", "moufang"),
    ("extra", "c"),
    ("moufang", "lbol"),
    ("moufang", "rbol"),
    ("moufang", "flexible"),
    ("moufang", "rif"),
    ("c", "lc"),
    ("c", "rc"),
    ("lbol", "lalt"),
    ("rbol", "ralt"),
    ("lc", "lalt"),
    ("lc", "lns"),
    ("lc", "mns"),
    ("rc", "ralt"),
    ("rc", "rns"),
    ("rc", "mns"),
    ("flexible", "flexible-bm"),
    ("flexible-bm", "flexible"),
];

fn lattice_consistency(battery: &WitnessBattery, brute: &Memberships) -> Outcome {
    let mut checks = 0;
    for mi in 0..battery.len() {
        for (cell, quad) in brute.grid.iter().enumerate() {
            for &(small, large) in INCLUSIONS {
                ensure(!brute.get(mi, cell, small) || brute.get(mi, cell, large), || {
                    format!("{small} without {large} at {quad} on {}", battery.members()[mi].label())
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{} edges, {checks} implications checked", INCLUSIONS.len()))
}

fn classifier_suite() -> Outcome {
    let cases = [
        ("x*=x", "never"),
        ("xxy=yxx", "PB"),
        ("xyx*=x*yx", "PB"),
        ("xx*y=x*yx", "PC"),
        ("xzyx=xyzx", "PC"),
        ("xxy=yx*x*", "PB&PS"),
    ];
    for (src, want) in cases {
        let id: GroupIdentity = src.parse().unwrap();
        let got = classify_identity(&canonicalize(&id));
        ensure(got.to_string() == want, || format!("{src}: {got}, expected {want}"))?;
    }
    let square: GroupIdentity = "g0xz*y*y*=g0y*y*xz*".parse().unwrap();
    let canon = canonicalize(&square);
    let expect: GroupIdentity = "xz*y*y*=y*y*xz*".parse().unwrap();
    ensure(canon == expect || canon == expect.swapped(), || format!("canonical form {canon}"))?;
    let got = classify_identity(&canon);
    ensure(got.to_string() == "PB", || format!("square identity: {got}"))?;
    Ok(format!("{} patterns and the central-square identity", cases.len()))
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let battery = WitnessBattery::standard();
    let start = Instant::now();
    let brute = Memberships::compute(battery);
    let brute_time = start.elapsed();
    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("golden reproduction", Box::new(golden_reproduction)),
        ("Chein construction", Box::new(chein_construction)),
        ("de Barros-Juriaans construction", Box::new(|| dbj_construction(battery))),
        ("master oracle", Box::new(|| master_oracle(battery, &brute))),
        ("reduction isomorphisms", Box::new(|| reduction_isomorphisms(battery))),
        ("loop criterion", Box::new(loop_criterion)),
        ("structural properties", Box::new(|| structural_properties(battery))),
        ("lattice consistency", Box::new(|| lattice_consistency(battery, &brute))),
        ("classifier suite", Box::new(classifier_suite)),
    ];
    println!("brute-force memberships computed in {brute_time:.2?}");
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail} ({:.2?})", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
