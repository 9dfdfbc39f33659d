//! The worked families and blueprints used across the test suites and
//! exposed through the CLI fixture catalog.

use std::collections::BTreeSet;

use crate::blueprint::{Blueprint, PingPongWitness, SetSpec, WitnessGenerator};
use crate::diagram::{diagram, DynamicalDiagram};
use crate::interval::Interval;
use crate::num::{int, rat, XRat};
use crate::plmap::{Affine, PLMap};

/// The i-th generator of F_n acting on the line: identity below i,
/// constant slope n on [i, i+1], translation by n-1 above i+1.
pub fn f_generator(n: i64, i: i64) -> PLMap {
    assert!(n >= 2 && (0..n).contains(&i));
    PLMap::from_parts(
        vec![(int(i), int(i)), (int(i + 1), int(i + n))],
        Affine::identity(),
        Affine::new(int(1), int(n - 1)).expect("positive slope"),
    )
    .expect("valid breakpoints")
}

pub fn f_generators(n: i64) -> Vec<PLMap> {
    (0..n).map(|i| f_generator(n, i)).collect()
}

/// The bump chain generating F_n: h_i = g_i g_{i+1}^{-1} for i < n-1 and
/// h_{n-1} = g_{n-1}. The support of h_i is (i, i+2), except the last,
/// which is (n-1, +inf).
pub fn f_chain(n: usize) -> Vec<PLMap> {
    let n = n as i64;
    let mut out = Vec::new();
    for i in 0..n - 1 {
        out.push(f_generator(n, i).compose(&f_generator(n, i + 1).invert()));
    }
    out.push(f_generator(n, n - 1));
    out
}

/// A non-fast variant of the F_2 chain: the first bump is slowed so its
/// marker image lands at 5/4 instead of 3/2, breaking the chain
/// inequality. Returns (slowed h_0, h_1).
pub fn slowed_pair() -> (PLMap, PLMap) {
    let slowed = PLMap::from_breaks(vec![
        (int(0), int(0)),
        (rat(1, 2), int(1)),
        (int(1), rat(5, 4)),
        (int(2), int(2)),
    ])
    .expect("valid breakpoints");
    (slowed, f_generator(2, 1))
}

/// The Brin-Navas pair f = a_0^{-1} a_2, g = a_1^{-1} over the fast
/// 3-chain (a_i) = the F_3 chain.
pub fn brin_navas() -> (Vec<PLMap>, Vec<String>) {
    let a = f_chain(3);
    let f = a[0].invert().compose(&a[2]);
    let g = a[1].invert();
    (vec![f, g], vec!["f".into(), "g".into()])
}

/// Two interleaved two-piece bumps on [0, 1] with pairwise disjoint feet;
/// the canonical realization of a two-element chain.
pub fn geofast_pair() -> Vec<PLMap> {
    vec![
        PLMap::two_piece_bump(int(0), rat(1, 4), rat(1, 2), rat(3, 4)).unwrap(),
        PLMap::two_piece_bump(rat(1, 4), rat(1, 2), rat(3, 4), int(1)).unwrap(),
    ]
}

/// A two-generator family where the second generator owns one chain bump
/// plus two isolated bumps living in a gap of the first generator's feet;
/// the isolated pair is excisable.
pub fn excision_family() -> (Vec<PLMap>, Vec<String>) {
    let b = PLMap::from_breaks(vec![(int(0), int(0)), (int(4), int(6)), (int(8), int(8))])
        .expect("chain bump of g0");
    let a = PLMap::from_breaks(vec![(int(4), int(4)), (int(6), int(12)), (int(16), int(16))])
        .expect("chain bump of g1");
    let e1 = PLMap::two_piece_bump(int(17), int(18), rat(37, 2), int(19)).unwrap();
    let e2 = PLMap::two_piece_bump(int(20), int(21), rat(43, 2), int(22)).unwrap();
    let f = a.compose(&e1).compose(&e2);
    (vec![b, f], vec!["g0".into(), "g1".into()])
}

/// The twelve-feet diagram whose chain decomposition has two 2-chains, a
/// singleton chain, and one isolated bump.
pub fn chain_decomp_diagram() -> DynamicalDiagram {
    diagram(
        12,
        &[
            (0, 3, "a0"),
            (1, 8, "a1"),
            (2, 11, "a2"),
            (4, 9, "a3"),
            (5, 6, "a4"),
            (7, 10, "a5"),
        ],
    )
}

fn open_iv(lo: XRat, hi: XRat) -> Interval {
    Interval::open(lo, hi).unwrap()
}

/// The quartic projective-line witness acting on the irrationals: two
/// generators with total support and one marker class {a, b}.
pub fn psl2_witness() -> PingPongWitness {
    PingPongWitness {
        generators: vec![
            WitnessGenerator {
                name: "a".into(),
                supt: SetSpec::all(),
                dest: SetSpec::Intervals(vec![open_iv(XRat::of(2, 1), XRat::PlusInf)]),
                dest_inv: SetSpec::Intervals(vec![open_iv(XRat::MinusInf, XRat::of(-2, 1))]),
            },
            WitnessGenerator {
                name: "b".into(),
                supt: SetSpec::all(),
                dest: SetSpec::Intervals(vec![open_iv(XRat::of(-1, 2), XRat::of(0, 1))]),
                dest_inv: SetSpec::Intervals(vec![open_iv(XRat::of(0, 1), XRat::of(1, 2))]),
            },
        ],
        markers: vec![BTreeSet::from(["a".to_string(), "b".to_string()])],
    }
}

pub fn psl2_blueprint() -> Blueprint {
    psl2_witness().blueprint().expect("fixture is a valid witness")
}

/// The squares variant restricted to the irrationals: same total supports
/// but no marker classes, hence not faithful.
pub fn psl2_squares_blueprint() -> Blueprint {
    let w = PingPongWitness {
        generators: vec![
            WitnessGenerator {
                name: "a".into(),
                supt: SetSpec::all(),
                dest: SetSpec::Intervals(vec![
                    Interval::left_closed(XRat::of(1, 1), XRat::PlusInf).unwrap(),
                ]),
                dest_inv: SetSpec::Intervals(vec![open_iv(XRat::MinusInf, XRat::of(-1, 1))]),
            },
            WitnessGenerator {
                name: "b".into(),
                supt: SetSpec::all(),
                dest: SetSpec::Intervals(vec![
                    Interval::left_closed(XRat::of(-1, 1), XRat::of(0, 1)).unwrap(),
                ]),
                dest_inv: SetSpec::Intervals(vec![open_iv(XRat::of(0, 1), XRat::of(1, 1))]),
            },
        ],
        markers: vec![],
    };
    w.blueprint().expect("fixture is a valid witness")
}
