//! The acceptance gate: ten exact-arithmetic criteria, each printing one
//! pass/fail line (run with `cargo test --test acceptance -- --nocapture`
//! to see them). Tolerances are exact equality throughout; the stated
//! runtime budgets are asserted.

use std::time::Instant;

use geofast::blueprint::{
    blueprint_of, classify_orderability, enumerate_histories, freeness_probe, hat_apply,
    is_faithful, Orderability,
};
use geofast::fastness::{
    canonical_marking, fastness_report, feet_disjoint, BumpFamily,
};
use geofast::fixtures;
use geofast::gen::{
    power_until_fast, random_diagram, random_proper_family, random_reduced_word, rng,
};
use geofast::interval::Interval;
use geofast::num::{int, rat, Rat, XRat};
use geofast::plmap::{PLMap, Sign};
use geofast::symbolic::{
    density_witness, enumerate_orbit, evaluate_local, in_lambda, local_reduce,
    revlex_compare, transport_between, word_is_identity, LocalWord, Word,
};
use geofast::system::{default_names, FastSystem};

fn pass(n: usize, details: &str) {
    println!("criterion {n}: PASS — {details}");
}

#[test]
fn criterion_01_f2_fixture_exactness() {
    let start = Instant::now();
    let chain = fixtures::f_chain(2);
    let family = BumpFamily::new(
        chain
            .iter()
            .flat_map(|m| m.signed_bumps().into_iter().map(|(b, _)| b))
            .collect(),
    );
    let report = fastness_report(&family);
    assert!(report.fast, "the F_2 chain is geometrically fast");
    assert_eq!(report.chains.len(), 1);
    let c = &report.chains[0];
    assert_eq!(c.c_min, int(1));
    assert_eq!(c.c_max, int(2));
    assert_eq!(c.image, int(2));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "runtime budget: {elapsed:?}");
    pass(1, &format!("fast, C_min=1, C_max=2, C_min*prod=2, {elapsed:?}"));
}

#[test]
fn criterion_02_f_relations_and_membership_agreement() {
    let start = Instant::now();
    let g = fixtures::f_generators(2);
    let gnames = default_names(2);
    let a = Word::parse("g0 g1^-1", &gnames).unwrap();
    for b in [
        Word::parse("g0^-1 g1 g0", &gnames).unwrap(),
        Word::parse("g0^-2 g1 g0^2", &gnames).unwrap(),
    ] {
        assert!(
            word_is_identity(&a.commutator(&b), &g),
            "defining relator fails"
        );
    }
    // membership verdicts agree between the chain and the g-generators
    let h = fixtures::f_chain(2);
    let mut r = rng(201);
    let rewrite = |w: &Word| -> Word {
        let mut out = Word::empty();
        for &(gen, sign) in w.letters() {
            match (gen, sign) {
                (0, Sign::Plus) => {
                    out.push(0, Sign::Plus);
                    out.push(1, Sign::Minus);
                }
                (0, Sign::Minus) => {
                    out.push(1, Sign::Plus);
                    out.push(0, Sign::Minus);
                }
                (1, s) => out.push(1, s),
                _ => unreachable!(),
            }
        }
        out
    };
    let mut identities = 0;
    for _ in 0..200 {
        let len = rand::Rng::gen_range(&mut r, 0..=10);
        let w = random_reduced_word(&mut r, 2, len);
        let via_chain = word_is_identity(&w, &h);
        let via_g = word_is_identity(&rewrite(&w), &g);
        assert_eq!(via_chain, via_g, "membership verdicts must agree");
        identities += via_chain as usize;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "runtime budget: {elapsed:?}");
    pass(
        2,
        &format!("both relators hold; 200/200 verdicts agree ({identities} identities), {elapsed:?}"),
    );
}

#[test]
fn criterion_03_fastness_criterion_vs_marking_oracle() {
    let seed = 202;
    let mut r = rng(seed);
    let mut fast_count = 0;
    let mut powered_count = 0;
    for _ in 0..200 {
        let fam = random_proper_family(&mut r, 4);
        let report = fastness_report(&fam);
        if report.fast {
            fast_count += 1;
            let marking = canonical_marking(&fam).unwrap();
            let feet = marking.feet().expect("fast families mark inside orbitals");
            assert!(feet_disjoint(feet), "criterion-true must give disjoint feet");
        } else {
            let (k, _) = power_until_fast(&fam, 64)
                .expect("some power up to 64 must become fast");
            assert!(k <= 64);
            powered_count += 1;
        }
    }
    pass(
        3,
        &format!("seed {seed}: {fast_count} fast with disjoint feet, {powered_count} powered to fast (k <= 64)"),
    );
}

#[test]
fn criterion_04_ping_pong_lemma() {
    let seed = 203;
    let mut r = rng(seed);
    let mut done = 0;
    while done < 500 {
        let fam = loop {
            let fam = random_proper_family(&mut r, 3);
            if let Some((_, powered)) = power_until_fast(&fam, 64) {
                break powered;
            }
        };
        let maps = fam.maps();
        let sys = FastSystem::new(maps.clone(), default_names(maps.len())).unwrap();
        let Some(x) = sample_point_avoiding_feet(&mut r, &sys) else {
            continue;
        };
        let len = rand::Rng::gen_range(&mut r, 1..=8);
        let Some(syms) = random_locally_reduced_syms(&mut r, &sys, &x, len) else {
            continue;
        };
        let image = geofast::symbolic::apply_syms(&sys, &x, &syms);
        let dest = sys.sym_dest_interval(*syms.last().unwrap());
        assert!(
            dest.contains_point(&XRat::Fin(image)),
            "x * w must land in dest(w)"
        );
        done += 1;
    }
    pass(4, &format!("seed {seed}: 500/500 locally reduced words landed in their destination"));
}

#[test]
fn criterion_05_marked_isomorphism() {
    let start = Instant::now();
    let seed = 204;
    let mut r = rng(seed);
    let mut words_tested = 0usize;
    for round in 0..20 {
        let d = random_diagram(&mut r, 4, true);
        let term = d.realize_terminal().unwrap();
        let dyad = d.realize_dyadic().unwrap();
        let x = FastSystem::new(term.maps, term.labels).unwrap();
        let y = FastSystem::new(dyad.maps, dyad.labels).unwrap();
        assert!(x.diagram().isomorphism_to(y.diagram()).is_some());
        let n = x.names().len();
        for _ in 0..500 {
            let len = rand::Rng::gen_range(&mut r, 0..=12);
            let w = random_reduced_word(&mut r, n, len);
            assert_eq!(
                word_is_identity(&w, x.generators()),
                word_is_identity(&w, y.generators()),
                "identity verdicts must agree across realizations (round {round})"
            );
            words_tested += 1;
        }
        // theta preserves the order of the enumerated orbit
        let t = transport_between(&x, &y).unwrap();
        let mut points = enumerate_orbit(&x, 6);
        points.sort_by(|a, b| a.value.cmp(&b.value));
        let images: Vec<Rat> = points.iter().map(|p| t.point(&p.word).1).collect();
        for w in images.windows(2) {
            assert!(w[0] < w[1], "theta must preserve the orbit order");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "runtime budget: {elapsed:?}");
    pass(
        5,
        &format!("seed {seed}: 20 diagram pairs, {words_tested} word verdicts agree, theta order-preserving, {elapsed:?}"),
    );
}

#[test]
fn criterion_06_terminal_realization() {
    let seed = 205;
    let mut r = rng(seed);
    let mut diagrams: Vec<geofast::diagram::DynamicalDiagram> = (0..12)
        .map(|_| random_diagram(&mut r, 4, true))
        .collect();
    diagrams.push(fixtures::chain_decomp_diagram().eliminate_isolated());
    let mut max_witness = 0usize;
    for d in &diagrams {
        let real = d.realize_terminal().unwrap();
        // foot slopes exactly at least 2
        for m in &real.maps {
            for (b, _) in m.signed_bumps() {
                let bp = b.map().breakpoints();
                let (x, s, t, y) = (&bp[0].0, &bp[1].0, &bp[1].1, &bp[2].0);
                assert!((t - x) / (s - x) >= int(2));
                assert!((y - s) / (y - t) >= int(2));
            }
        }
        // diagram round trip
        let sys = FastSystem::new(real.maps, real.labels).unwrap();
        assert!(sys.diagram().isomorphism_to(d).is_some(), "round trip fails");
        // density proxy: every 1/64 dyadic interval meets the orbit within
        // word length 20
        for i in 0..64i64 {
            let target = Interval::new(
                XRat::Fin(rat(i, 64)),
                false,
                XRat::Fin(rat(i + 1, 64)),
                false,
            )
            .unwrap();
            let w = density_witness(&sys, &target, 64)
                .unwrap_or_else(|| panic!("interval {i}/64 not reached"));
            assert!(w.len() <= 20, "witness length {} exceeds 20", w.len());
            assert!(target.contains_point(&XRat::Fin(evaluate_local(&sys, &w))));
            max_witness = max_witness.max(w.len());
        }
    }
    pass(
        6,
        &format!(
            "seed {seed}: {} realizations — slopes >= 2, round trips, density within length {max_witness} <= 20",
            diagrams.len()
        ),
    );
}

#[test]
fn criterion_07_excision() {
    let seed = 206;
    let mut r = rng(seed);
    let (maps, names) = fixtures::excision_family();
    let sys = FastSystem::new(maps.clone(), names).unwrap();
    let certs = geofast::excision::find_extraneous(&sys);
    assert_eq!(certs.len(), 1, "the fixture has exactly one certificate");
    let quotient = geofast::excision::excise(&sys, &certs[0]).unwrap();
    let mut identities = 0;
    for _ in 0..500 {
        let len = rand::Rng::gen_range(&mut r, 0..=10);
        let w = random_reduced_word(&mut r, 2, len);
        let before = word_is_identity(&w, &maps);
        let after = word_is_identity(&w, &quotient);
        assert_eq!(before, after, "identity must be preserved by excision");
        identities += before as usize;
    }
    pass(
        7,
        &format!("seed {seed}: 500/500 verdicts agree across excision ({identities} identities)"),
    );
}

#[test]
fn criterion_08_lambda_calculus() {
    let seed = 207;
    let mut r = rng(seed);
    let systems = vec![
        FastSystem::new(fixtures::f_chain(2), default_names(2)).unwrap(),
        FastSystem::new(fixtures::f_chain(3), default_names(3)).unwrap(),
    ];
    for _ in 0..1000 {
        let sys = &systems[rand::Rng::gen_range(&mut r, 0..systems.len())];
        let marker = rand::Rng::gen_range(&mut r, 0..sys.initial_bumps().len());
        let len = rand::Rng::gen_range(&mut r, 0..=12);
        let syms = (0..len)
            .map(|_| rand::Rng::gen_range(&mut r, 0..sys.sym_count()))
            .collect();
        let lw = LocalWord { marker, syms };
        let red = local_reduce(sys, &lw);
        assert!(in_lambda(sys, &red));
        assert_eq!(evaluate_local(sys, &red), evaluate_local(sys, &lw));
    }
    // revlex order agrees with evaluation on the full enumerations
    let mut counts = Vec::new();
    for sys in &systems {
        let mut points = enumerate_orbit(sys, 6);
        counts.push(points.len());
        points.sort_by(|a, b| revlex_compare(sys, &a.word, &b.word).unwrap());
        for w in points.windows(2) {
            assert!(
                w[0].value < w[1].value,
                "revlex must agree with evaluation order"
            );
        }
    }
    pass(
        8,
        &format!(
            "seed {seed}: 1000 reductions evaluation-invariant; revlex sorted {} + {} orbit points",
            counts[0], counts[1]
        ),
    );
}

#[test]
fn criterion_09_abstract_system() {
    let start = Instant::now();
    // the projective fixture is faithful and free to depth 8
    let psl2 = fixtures::psl2_blueprint();
    assert!(is_faithful(&psl2, 6).faithful);
    let verdict = freeness_probe(&psl2, 8, 10);
    assert!(verdict.relator.is_none(), "the quartic system is free to depth 8");
    assert_eq!(verdict.free_to, 8);
    assert_eq!(
        verdict.words_by_length.last().copied(),
        Some(8748),
        "4 * 3^7 reduced words of length exactly 8"
    );
    // hat involution, exhaustive to depth 6
    let mut involution_checks = 0usize;
    for bp in [psl2.clone(), {
        let sys = FastSystem::new(fixtures::f_chain(2), default_names(2)).unwrap();
        blueprint_of(&sys).blueprint
    }] {
        for eta in enumerate_histories(&bp, 6, 500_000) {
            for a in bp.active() {
                let fwd = hat_apply(&bp, &eta, a);
                assert_eq!(hat_apply(&bp, &fwd, bp.inverse_of(a).unwrap()), eta);
                involution_checks += 1;
            }
        }
    }
    // classification: chains are orderable (F), the projective fixture is
    // cyclically orderable (T)
    for n in 2..=4 {
        let sys = FastSystem::new(fixtures::f_chain(n), default_names(n)).unwrap();
        let bp = blueprint_of(&sys).blueprint;
        assert!(matches!(
            classify_orderability(&bp, 14).unwrap(),
            Orderability::Orderable { .. }
        ));
    }
    assert!(matches!(
        classify_orderability(&psl2, 14).unwrap(),
        Orderability::CyclicallyOrderable { .. }
    ));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "runtime budget: {elapsed:?}");
    pass(
        9,
        &format!("faithful; 8748 length-8 words all move a history; {involution_checks} involution checks; chains -> F, projective -> T; {elapsed:?}"),
    );
}

#[test]
fn criterion_10_marker_count_formula() {
    let mut cases: Vec<(String, Vec<PLMap>, Vec<String>)> = Vec::new();
    for n in 2..=4 {
        cases.push((format!("chain F_{n}"), fixtures::f_chain(n), default_names(n)));
    }
    let (bn, bn_names) = fixtures::brin_navas();
    cases.push(("brin-navas".into(), bn, bn_names));
    cases.push((
        "geofast-pair".into(),
        fixtures::geofast_pair(),
        default_names(2),
    ));
    let (exc, exc_names) = fixtures::excision_family();
    cases.push(("excision".into(), exc, exc_names));
    for (tag, d) in [
        ("chain-decomp", fixtures::chain_decomp_diagram()),
        (
            "chain-decomp isolated-free",
            fixtures::chain_decomp_diagram().eliminate_isolated(),
        ),
    ] {
        let real = d.realize_dyadic().unwrap();
        cases.push((format!("dyadic {tag}"), real.maps, real.labels));
        if d.isolated_edges().is_empty() {
            let real = d.realize_terminal().unwrap();
            cases.push((format!("terminal {tag}"), real.maps, real.labels));
        }
    }
    let total = cases.len();
    for (name, maps, names) in cases {
        let sys = FastSystem::new(maps, names).expect("fixture is fast");
        let fam = BumpFamily::new(sys.bumps().to_vec());
        let part = geofast::fastness::maximal_chains(&fam).unwrap();
        assert_eq!(
            sys.initial_bumps().len(),
            part.chains.len() + part.isolated.len(),
            "marker formula fails on {name}"
        );
    }
    pass(10, &format!("initial markers = chains + isolated on all {total} fixtures"));
}

// -- helpers shared with the property suite ---------------------------------

fn sample_point_avoiding_feet(
    r: &mut rand_chacha::ChaCha8Rng,
    sys: &FastSystem,
) -> Option<Rat> {
    for _ in 0..200 {
        let x = rat(rand::Rng::gen_range(r, 0..=256), 256);
        let p = XRat::Fin(x.clone());
        let in_feet = sys
            .feet()
            .iter()
            .any(|f| f.src.contains_point(&p) || f.dest.contains_point(&p));
        let in_support = sys.bumps().iter().any(|b| b.support().contains_point(&p));
        if !in_feet && in_support {
            return Some(x);
        }
    }
    None
}

fn random_locally_reduced_syms(
    r: &mut rand_chacha::ChaCha8Rng,
    sys: &FastSystem,
    x: &Rat,
    len: usize,
) -> Option<Vec<usize>> {
    let mut syms = Vec::new();
    let mut cur = x.clone();
    for _ in 0..len {
        let choices: Vec<usize> = (0..sys.sym_count())
            .filter(|&s| {
                if let Some(&last) = syms.last() {
                    if s == geofast::system::sym_inverse(last) {
                        return false;
                    }
                }
                sys.bumps()[geofast::system::sym_bump(s)]
                    .support()
                    .contains_point(&XRat::Fin(cur.clone()))
            })
            .collect();
        if choices.is_empty() {
            return None;
        }
        let s = choices[rand::Rng::gen_range(r, 0..choices.len())];
        cur = sys.apply_sym(&cur, s);
        syms.push(s);
    }
    Some(syms)
}
