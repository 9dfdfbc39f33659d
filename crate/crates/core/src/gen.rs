//! Seeded generators of random families, diagrams, and words for the
//! property suites. Breakpoints live on the 1/64 grid in [0, 1] so that
//! all derived quantities stay small exact rationals; every suite prints
//! its seed for reproducibility.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagram::{DiagramEdge, DynamicalDiagram};
use crate::fastness::BumpFamily;
use crate::num::{rat, Rat};
use crate::plmap::{Bump, PLMap, Sign};
use crate::symbolic::Word;

pub const GRID: i64 = 64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn grid_point(cell: i64) -> Rat {
    rat(cell, GRID)
}

/// A positive bump on the grid with orbital (lo, hi) (in cells) and one to
/// three interior breakpoints strictly above the diagonal.
pub fn random_bump(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Bump {
    assert!(hi - lo >= 3, "orbital needs room for an interior breakpoint");
    loop {
        let k = rng.gen_range(1..=3.min(hi - lo - 2));
        let mut inputs: Vec<i64> = Vec::new();
        let mut pool: Vec<i64> = (lo + 1..hi).collect();
        pool.shuffle(rng);
        inputs.extend(pool.iter().take(k as usize));
        inputs.sort();
        let mut outputs = Vec::with_capacity(inputs.len());
        let mut prev = lo;
        let mut ok = true;
        for (i, &u) in inputs.iter().enumerate() {
            let min_v = (u + 1).max(prev + 1);
            let max_v = hi - (inputs.len() as i64 - 1 - i as i64) - 1;
            if min_v > max_v {
                ok = false;
                break;
            }
            let v = rng.gen_range(min_v..=max_v);
            outputs.push(v);
            prev = v;
        }
        if !ok {
            continue;
        }
        let mut breaks = vec![(grid_point(lo), grid_point(lo))];
        for (u, v) in inputs.iter().zip(&outputs) {
            breaks.push((grid_point(*u), grid_point(*v)));
        }
        breaks.push((grid_point(hi), grid_point(hi)));
        let map = PLMap::from_breaks(breaks).expect("grid breakpoints are monotone");
        return Bump::new(map).expect("above-diagonal breakpoints give a positive bump");
    }
}

/// A geometrically proper family of one to `max_bumps` bumps: distinct
/// left endpoints and distinct right endpoints on the grid.
pub fn random_proper_family(rng: &mut ChaCha8Rng, max_bumps: usize) -> BumpFamily {
    let n = rng.gen_range(1..=max_bumps);
    loop {
        let mut spans: Vec<(i64, i64)> = Vec::with_capacity(n);
        for _ in 0..n {
            let lo = rng.gen_range(0..=GRID - 3);
            let hi = rng.gen_range(lo + 3..=GRID);
            spans.push((lo, hi));
        }
        let mut lefts: Vec<i64> = spans.iter().map(|s| s.0).collect();
        let mut rights: Vec<i64> = spans.iter().map(|s| s.1).collect();
        lefts.sort();
        lefts.dedup();
        rights.sort();
        rights.dedup();
        if lefts.len() != n || rights.len() != n {
            continue;
        }
        let bumps = spans
            .into_iter()
            .map(|(lo, hi)| random_bump(rng, lo, hi))
            .collect();
        return BumpFamily::new(bumps);
    }
}

/// Powers a proper family until it passes the fastness criterion.
pub fn power_until_fast(fam: &BumpFamily, cap: i64) -> Option<(i64, BumpFamily)> {
    crate::fastness::fast_power(fam, cap)
}

/// A random piecewise-linear homeomorphism: a product of signed grid
/// bumps, sometimes with a translating tail mixed in.
pub fn random_plmap(rng: &mut ChaCha8Rng) -> PLMap {
    let mut m = PLMap::identity();
    for _ in 0..rng.gen_range(1..=3) {
        let lo = rng.gen_range(0..=GRID - 3);
        let hi = rng.gen_range(lo + 3..=GRID);
        let b = random_bump(rng, lo, hi);
        let f = if rng.gen_bool(0.5) {
            b.map().clone()
        } else {
            b.map().invert()
        };
        m = m.compose(&f);
    }
    if rng.gen_bool(0.25) {
        let g = crate::fixtures::f_generator(2, rng.gen_range(0..2));
        m = m.compose(&if rng.gen_bool(0.5) { g.invert() } else { g });
    }
    m
}

/// A random rational with denominator dividing 256, in [-2, 3].
pub fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-512..=768), 256)
}

/// A freely reduced word of the given length over `n_gens` generators.
pub fn random_reduced_word(rng: &mut ChaCha8Rng, n_gens: usize, len: usize) -> Word {
    let mut w = Word::empty();
    let mut last: Option<(usize, Sign)> = None;
    for _ in 0..len {
        loop {
            let g = rng.gen_range(0..n_gens);
            let s = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
            if last == Some((g, s.flip())) {
                continue;
            }
            w.push(g, s);
            last = Some((g, s));
            break;
        }
    }
    w
}

/// A random dynamical diagram with up to `max_edges` edges: a random
/// matching on the feet, random directions, and labels grouped greedily
/// among span-disjoint edges.
pub fn random_diagram(
    rng: &mut ChaCha8Rng,
    max_edges: usize,
    isolated_free: bool,
) -> DynamicalDiagram {
    // a single edge always joins consecutive feet, so isolated-free
    // diagrams need at least two edges
    let least = if isolated_free { 2 } else { 1 };
    assert!(max_edges >= least);
    let n = rng.gen_range(least..=max_edges);
    'outer: loop {
        let mut verts: Vec<usize> = (0..2 * n).collect();
        verts.shuffle(rng);
        let mut spans: Vec<(usize, usize)> = Vec::with_capacity(n);
        for pair in verts.chunks(2) {
            let (lo, hi) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if isolated_free && hi == lo + 1 {
                continue 'outer;
            }
            spans.push((lo, hi));
        }
        spans.sort();
        // greedy label grouping among span-disjoint edges
        let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut label_of: Vec<usize> = Vec::with_capacity(n);
        for &(lo, hi) in &spans {
            let mut chosen = None;
            if rng.gen_bool(0.4) {
                for (gi, group) in groups.iter().enumerate() {
                    let disjoint = group.iter().all(|&(a, b)| b < lo || hi < a);
                    if disjoint {
                        chosen = Some(gi);
                        break;
                    }
                }
            }
            let gi = chosen.unwrap_or_else(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[gi].push((lo, hi));
            label_of.push(gi);
        }
        let edges: Vec<DiagramEdge> = spans
            .iter()
            .zip(&label_of)
            .map(|(&(lo, hi), &g)| {
                let positive = rng.gen_bool(0.5);
                DiagramEdge {
                    src: if positive { lo } else { hi },
                    dst: if positive { hi } else { lo },
                    label: format!("f{g}"),
                }
            })
            .collect();
        return DynamicalDiagram::new(2 * n, edges).expect("matching gives degree one");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fastness::{fastness_report, is_geometrically_proper};

    #[test]
    fn generated_families_are_proper() {
        let mut r = rng(7);
        for _ in 0..50 {
            let fam = random_proper_family(&mut r, 4);
            assert!(is_geometrically_proper(&fam.maps()));
            let _ = fastness_report(&fam);
        }
    }

    #[test]
    fn generated_diagrams_validate_and_realize() {
        let mut r = rng(11);
        for _ in 0..50 {
            let d = random_diagram(&mut r, 4, true);
            assert!(d.isolated_edges().is_empty());
            let real = d.realize_terminal().unwrap();
            assert_eq!(real.maps.len(), d.labels().len());
        }
    }

    #[test]
    fn generated_words_are_reduced() {
        let mut r = rng(13);
        for _ in 0..100 {
            let w = random_reduced_word(&mut r, 3, 12);
            assert_eq!(w.free_reduce(), w);
        }
    }
}
