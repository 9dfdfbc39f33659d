//! Local words and their calculus: the purely combinatorial local
//! reduction, exact evaluation, the reverse-lexicographic order, marker
//! orbit enumeration, transport of orbit points between realizations of a
//! common diagram, and the word problem.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::diagram::DiagramIso;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::num::{Rat, XRat};
use crate::plmap::{PLMap, Sign};
use crate::system::{sym, sym_bump, sym_inverse, sym_is_positive, FastSystem, Sym};

/// A word over a generating family: letters are (generator index, sign).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Word {
    letters: Vec<(usize, Sign)>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<(usize, Sign)>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[(usize, Sign)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, gen: usize, sign: Sign) {
        self.letters.push((gen, sign));
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(g, s)| (g, s.flip()))
                .collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Commutator [self, other] = self^-1 other^-1 self other.
    pub fn commutator(&self, other: &Word) -> Word {
        self.inverse()
            .concat(&other.inverse())
            .concat(self)
            .concat(other)
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<(usize, Sign)> = Vec::with_capacity(self.letters.len());
        for &(g, s) in &self.letters {
            if out.last() == Some(&(g, s.flip())) {
                out.pop();
            } else {
                out.push((g, s));
            }
        }
        Word { letters: out }
    }

    /// Whitespace-separated tokens `name` or `name^k` with k a nonzero
    /// integer; `name^-k` expands to k inverse letters.
    pub fn parse(text: &str, names: &[String]) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (name, exp) = split_token(token)?;
            let g = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            let sign = if exp > 0 { Sign::Plus } else { Sign::Minus };
            for _ in 0..exp.unsigned_abs() {
                letters.push((g, sign));
            }
        }
        Ok(Word { letters })
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "ε".to_string();
        }
        self.letters
            .iter()
            .map(|&(g, s)| match s {
                Sign::Plus => names[g].clone(),
                Sign::Minus => format!("{}^-1", names[g]),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Exact composition of the word over the given generator maps.
    pub fn compose(&self, maps: &[PLMap]) -> PLMap {
        let mut acc = PLMap::identity();
        for &(g, s) in &self.letters {
            let factor = match s {
                Sign::Plus => maps[g].clone(),
                Sign::Minus => maps[g].invert(),
            };
            acc = acc.compose(&factor);
        }
        acc
    }
}

pub fn split_token(token: &str) -> Result<(&str, i64)> {
    match token.split_once('^') {
        None => Ok((token, 1)),
        Some((name, exp)) => {
            let k: i64 = exp
                .parse()
                .map_err(|_| Error::BadWordToken(token.to_string()))?;
            if k == 0 || name.is_empty() {
                return Err(Error::BadWordToken(token.to_string()));
            }
            Ok((name, k))
        }
    }
}

/// The composition oracle for the word problem: exact composition compared
/// with the identity in canonical form.
pub fn word_is_identity(w: &Word, maps: &[PLMap]) -> bool {
    w.compose(maps).is_identity()
}

/// Word problem with the marker-orbit cross-check: the composition oracle
/// is authoritative; for nonidentity words a moved marker-orbit point is
/// searched breadth-first up to `depth_cap` (default 2|w| + 8 when None).
pub struct IdentityVerdict {
    pub identity: bool,
    /// A marker-orbit point moved by the word, when one was found.
    pub moved_point: Option<(LocalWord, Rat)>,
}

pub fn word_is_identity_checked(
    sys: &FastSystem,
    w: &Word,
    depth_cap: Option<usize>,
) -> IdentityVerdict {
    let map = w.compose(sys.generators());
    if map.is_identity() {
        return IdentityVerdict {
            identity: true,
            moved_point: None,
        };
    }
    let cap = depth_cap.unwrap_or(2 * w.len() + 8);
    let moved = find_moved_orbit_point(sys, &map, cap);
    IdentityVerdict {
        identity: false,
        moved_point: moved,
    }
}

/// A local word: an initial marker symbol followed by signed bump symbols.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalWord {
    pub marker: usize,
    pub syms: Vec<Sym>,
}

impl LocalWord {
    pub fn marker_only(marker: usize) -> Self {
        LocalWord {
            marker,
            syms: Vec::new(),
        }
    }

    pub fn extended(&self, s: Sym) -> LocalWord {
        let mut syms = self.syms.clone();
        syms.push(s);
        LocalWord {
            marker: self.marker,
            syms,
        }
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }

    /// First token is the marker name `m{i}`; the rest are bump names with
    /// optional `^k` exponents.
    pub fn parse(text: &str, sys: &FastSystem) -> Result<LocalWord> {
        let mut tokens = text.split_whitespace();
        let first = tokens
            .next()
            .ok_or_else(|| Error::BadWordToken(text.to_string()))?;
        let marker = sys.marker_index_by_name(first)?;
        let mut syms = Vec::new();
        for token in tokens {
            let (name, exp) = split_token(token)?;
            let bump = sys.bump_index_by_name(name)?;
            let s = sym(bump, if exp > 0 { Sign::Plus } else { Sign::Minus });
            for _ in 0..exp.unsigned_abs() {
                syms.push(s);
            }
        }
        Ok(LocalWord { marker, syms })
    }

    pub fn display(&self, sys: &FastSystem) -> String {
        let mut parts = vec![sys.marker_name(self.marker)];
        parts.extend(self.syms.iter().map(|&s| sys.sym_name(s)));
        parts.join(" ")
    }
}

/// Offset of the first violating consecutive pair, if any: 0 means the
/// (marker, first symbol) pair, i > 0 the pair (syms[i-1], syms[i]).
pub fn lambda_violation(sys: &FastSystem, lw: &LocalWord) -> Option<usize> {
    for i in 0..lw.syms.len() {
        let ok = if i == 0 {
            sys.marker_pair_ok(lw.marker, lw.syms[0])
        } else {
            sys.pair_ok(lw.syms[i - 1], lw.syms[i])
        };
        if !ok {
            return Some(i);
        }
    }
    None
}

pub fn in_lambda(sys: &FastSystem, lw: &LocalWord) -> bool {
    lambda_violation(sys, lw).is_none()
}

/// Local reduction: repeatedly fix the first violating pair, deleting the
/// pair when the second symbol is the inverse of the first and just the
/// second symbol otherwise. Purely combinatorial; the marker survives.
pub fn local_reduce(sys: &FastSystem, lw: &LocalWord) -> LocalWord {
    let mut syms = lw.syms.clone();
    while let Some(i) = lambda_violation(
        sys,
        &LocalWord {
            marker: lw.marker,
            syms: syms.clone(),
        },
    ) {
        if i > 0 && syms[i] == sym_inverse(syms[i - 1]) {
            syms.drain(i - 1..=i);
        } else {
            syms.remove(i);
        }
    }
    LocalWord {
        marker: lw.marker,
        syms,
    }
}

/// Exact value of the marker under the word.
pub fn evaluate_local(sys: &FastSystem, lw: &LocalWord) -> Rat {
    let mut t = sys.initial_marker_value(lw.marker).clone();
    for &s in &lw.syms {
        t = sys.apply_sym(&t, s);
    }
    t
}

/// Reverse-lexicographic comparison of two locally reduced local words:
/// walk from the last symbol backward and compare the first difference by
/// destination position (markers sit at their value's position).
pub fn revlex_compare(sys: &FastSystem, a: &LocalWord, b: &LocalWord) -> Result<Ordering> {
    for (lw, _) in [(a, 0), (b, 1)] {
        if let Some(i) = lambda_violation(sys, lw) {
            return Err(Error::NotInLambda(i));
        }
    }
    let pos = |lw: &LocalWord, back: usize| -> Option<usize> {
        let n = lw.syms.len();
        if back < n {
            Some(sys.sym_dest_position(lw.syms[n - 1 - back]))
        } else if back == n {
            Some(sys.marker_position(lw.marker))
        } else {
            None
        }
    };
    let mut back = 0;
    loop {
        match (pos(a, back), pos(b, back)) {
            (None, None) => return Ok(Ordering::Equal),
            (Some(x), Some(y)) => {
                if x != y {
                    return Ok(x.cmp(&y));
                }
                // same position means the same token; keep walking
                back += 1;
            }
            // a marker can only sit at the front, so one word being a
            // strict suffix of the other cannot happen in Lambda
            _ => unreachable!("local words share a suffix only when equal"),
        }
    }
}

/// A marker-orbit point: its locally reduced address and its exact value.
#[derive(Clone, Debug)]
pub struct OrbitPoint {
    pub word: LocalWord,
    pub value: Rat,
}

/// All locally reduced local words of length at most `max_len`, with their
/// values, in breadth-first order.
pub fn enumerate_orbit(sys: &FastSystem, max_len: usize) -> Vec<OrbitPoint> {
    let mut out = Vec::new();
    let mut queue: VecDeque<OrbitPoint> = (0..sys.initial_bumps().len())
        .map(|i| OrbitPoint {
            word: LocalWord::marker_only(i),
            value: sys.initial_marker_value(i).clone(),
        })
        .collect();
    while let Some(p) = queue.pop_front() {
        if p.word.len() < max_len {
            for s in 0..sys.sym_count() {
                let ok = match p.word.syms.last() {
                    None => sys.marker_pair_ok(p.word.marker, s),
                    Some(&last) => sys.pair_ok(last, s),
                };
                if ok {
                    queue.push_back(OrbitPoint {
                        word: p.word.extended(s),
                        value: sys.apply_sym(&p.value, s),
                    });
                }
            }
        }
        out.push(p);
    }
    out
}

/// Breadth-first search of the marker orbit for a point moved by `map`.
pub fn find_moved_orbit_point(
    sys: &FastSystem,
    map: &PLMap,
    max_len: usize,
) -> Option<(LocalWord, Rat)> {
    let mut queue: VecDeque<OrbitPoint> = (0..sys.initial_bumps().len())
        .map(|i| OrbitPoint {
            word: LocalWord::marker_only(i),
            value: sys.initial_marker_value(i).clone(),
        })
        .collect();
    while let Some(p) = queue.pop_front() {
        if map.eval_rat(&p.value) != p.value {
            return Some((p.word, p.value));
        }
        if p.word.len() < max_len {
            for s in 0..sys.sym_count() {
                let ok = match p.word.syms.last() {
                    None => sys.marker_pair_ok(p.word.marker, s),
                    Some(&last) => sys.pair_ok(last, s),
                };
                if ok {
                    queue.push_back(OrbitPoint {
                        word: p.word.extended(s),
                        value: sys.apply_sym(&p.value, s),
                    });
                }
            }
        }
    }
    None
}

/// The locally reduced address of every marker (initial or not): initial
/// markers are their own addresses; a non-initial marker t_k = t_j * a_j
/// extends the address of t_j by a_j.
pub fn marker_words(sys: &FastSystem) -> Vec<LocalWord> {
    let n = sys.bumps().len();
    let mut words: Vec<Option<LocalWord>> = vec![None; n];
    for (i, &k) in sys.initial_bumps().iter().enumerate() {
        words[k] = Some(LocalWord::marker_only(i));
    }
    // Non-initial markers point at a strictly smaller marker, so repeated
    // sweeps terminate.
    loop {
        let mut progressed = false;
        for k in 0..n {
            if words[k].is_some() {
                continue;
            }
            let t_k = &sys.markers()[k];
            let j = (0..n)
                .find(|&j| {
                    &sys.markers()[j] < t_k
                        && sys.bumps()[j].map().eval_rat(&sys.markers()[j]) == *t_k
                })
                .expect("non-initial marker has a predecessor");
            if let Some(w) = &words[j] {
                words[k] = Some(w.extended(sym(j, Sign::Plus)));
                progressed = true;
            }
        }
        if words.iter().all(|w| w.is_some()) {
            break;
        }
        assert!(progressed, "marker recursion must make progress");
    }
    let out: Vec<LocalWord> = words.into_iter().map(|w| w.unwrap()).collect();
    for w in &out {
        debug_assert!(in_lambda(sys, w));
    }
    out
}

/// The transport data between two fast systems with isomorphic diagrams:
/// the forced vertex bijection induces a bijection of bumps, of initial
/// markers, and of generators.
pub struct Transport<'a> {
    pub from: &'a FastSystem,
    pub to: &'a FastSystem,
    /// bump index in `from` -> bump index in `to`
    pub bump_map: Vec<usize>,
    /// initial marker index in `from` -> initial marker index in `to`
    pub marker_map: Vec<usize>,
    /// generator index in `from` -> generator index in `to`
    pub gen_map: Vec<usize>,
}

pub fn transport_between<'a>(x: &'a FastSystem, y: &'a FastSystem) -> Result<Transport<'a>> {
    let iso = x
        .diagram()
        .isomorphism_to(y.diagram())
        .ok_or_else(|| Error::NotIsomorphic("edge arcs or label pattern differ".into()))?;
    let m = x.bumps().len();
    let mut bump_map = vec![0usize; m];
    for k in 0..m {
        let src = x.foot_position(k, crate::system::Side::Src);
        let dest = x.foot_position(k, crate::system::Side::Dest);
        let j = (0..y.bumps().len())
            .find(|&j| {
                let s = y.foot_position(j, crate::system::Side::Src);
                let d = y.foot_position(j, crate::system::Side::Dest);
                (s, d) == (src, dest)
            })
            .ok_or_else(|| Error::NotIsomorphic(format!("no matching bump for {k}")))?;
        bump_map[k] = j;
    }
    let mut marker_map = Vec::with_capacity(x.initial_bumps().len());
    for &k in x.initial_bumps() {
        let j = bump_map[k];
        let pos = y
            .initial_bumps()
            .iter()
            .position(|&b| b == j)
            .ok_or_else(|| Error::NotIsomorphic(format!("bump {j} not initial in target")))?;
        marker_map.push(pos);
    }
    let mut gen_map = Vec::with_capacity(x.names().len());
    for name in x.names() {
        let target = iso
            .apply(name)
            .ok_or_else(|| Error::NotIsomorphic(format!("label {name} unmatched")))?;
        gen_map.push(y.generator_index_by_name(target)?);
    }
    Ok(Transport {
        from: x,
        to: y,
        bump_map,
        marker_map,
        gen_map,
    })
}

impl Transport<'_> {
    /// Transport of a marker-orbit point: relabel the locally reduced
    /// address and evaluate it in the target system.
    pub fn point(&self, lw: &LocalWord) -> (LocalWord, Rat) {
        let reduced = local_reduce(self.from, lw);
        let translated = LocalWord {
            marker: self.marker_map[reduced.marker],
            syms: reduced
                .syms
                .iter()
                .map(|&s| {
                    let b = self.bump_map[sym_bump(s)];
                    sym(
                        b,
                        if sym_is_positive(s) {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        },
                    )
                })
                .collect(),
        };
        assert!(
            in_lambda(self.to, &translated),
            "isomorphic diagrams share the local-reduction tables"
        );
        let value = evaluate_local(self.to, &translated);
        (translated, value)
    }

    /// Symbol-by-symbol relabeling of a generator word.
    pub fn word(&self, w: &Word) -> Word {
        Word::from_letters(
            w.letters()
                .iter()
                .map(|&(g, s)| (self.gen_map[g], s))
                .collect(),
        )
    }
}

/// Symbol-wise relabeling of a word through a diagram isomorphism given by
/// label names.
pub fn translate_word(
    iso: &DiagramIso,
    from_names: &[String],
    to_names: &[String],
    w: &Word,
) -> Result<Word> {
    let mut letters = Vec::with_capacity(w.len());
    for &(g, s) in w.letters() {
        let name = &from_names[g];
        let target = iso
            .apply(name)
            .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
        let j = to_names
            .iter()
            .position(|n| n == target)
            .ok_or_else(|| Error::UnknownGenerator(target.to_string()))?;
        letters.push((j, s));
    }
    Ok(Word::from_letters(letters))
}

/// Expansion of a generator word into signed bump symbols.
pub fn expand_to_syms(sys: &FastSystem, w: &Word) -> Vec<Sym> {
    let mut out = Vec::new();
    for &(g, sign) in w.letters() {
        for &(b, bsign) in &sys.gen_bumps()[g] {
            let effective = match (sign, bsign) {
                (Sign::Plus, Sign::Plus) | (Sign::Minus, Sign::Minus) => Sign::Plus,
                _ => Sign::Minus,
            };
            out.push(sym(b, effective));
        }
    }
    out
}

/// Is the symbol word locally reduced at the point x: freely reduced and
/// every prefix moves x?
pub fn locally_reduced_at(sys: &FastSystem, x: &Rat, syms: &[Sym]) -> bool {
    let mut t = x.clone();
    let mut prev: Option<Sym> = None;
    for &s in syms {
        if prev == Some(sym_inverse(s)) {
            return false;
        }
        let u = sys.apply_sym(&t, s);
        if u == t {
            return false;
        }
        t = u;
        prev = Some(s);
    }
    true
}

pub fn apply_syms(sys: &FastSystem, x: &Rat, syms: &[Sym]) -> Rat {
    syms.iter().fold(x.clone(), |t, &s| sys.apply_sym(&t, s))
}

// ---------------------------------------------------------------------------
// Density of the marker orbit for terminal realizations.

/// Finds a word w and initial marker m with m*w inside the target, by
/// expanding the target backward through the feet (slopes there are at
/// least 2) until it captures a marker-orbit point. Intended for
/// realizations whose two-piece bumps tile [0, 1); returns the witness
/// address, locally reduced.
pub fn density_witness(
    sys: &FastSystem,
    target: &Interval,
    max_steps: usize,
) -> Option<LocalWord> {
    let mwords = marker_words(sys);
    // construction feet from the two-piece breakpoints: src* = (x, s),
    // dest* = [t, y)
    let mut src_star = Vec::new();
    let mut dest_star = Vec::new();
    for b in sys.bumps() {
        let bp = b.map().breakpoints();
        assert_eq!(bp.len(), 3, "density search expects two-piece bumps");
        let (x, s, t, y) = (&bp[0].0, &bp[1].0, &bp[1].1, &bp[2].0);
        src_star.push(Interval::open(XRat::Fin(x.clone()), XRat::Fin(s.clone())).unwrap());
        dest_star.push(Interval::left_closed(XRat::Fin(t.clone()), XRat::Fin(y.clone())).unwrap());
    }
    let mut u = target.clone();
    let mut tail: Vec<Sym> = Vec::new();
    for _ in 0..max_steps {
        // 1. a marker value inside u
        if let Some(k) = (0..sys.bumps().len())
            .find(|&k| u.contains_point(&XRat::Fin(sys.markers()[k].clone())))
        {
            let mut w = mwords[k].clone();
            w.syms.extend_from_slice(&tail);
            return Some(local_reduce(sys, &w));
        }
        // 2. a canonical dest left endpoint (an orbit point) inside u
        if let Some(k) = (0..sys.bumps().len()).find(|&k| {
            let img = sys.bumps()[k].map().eval_rat(&sys.markers()[k]);
            u.contains_point(&XRat::Fin(img))
        }) {
            let mut w = mwords[k].clone().extended(sym(k, Sign::Plus));
            w.syms.extend_from_slice(&tail);
            return Some(local_reduce(sys, &w));
        }
        // 3. chase a transition point inside u along its bump
        let chase_cap = 64;
        let mut chased = None;
        for k in 0..sys.bumps().len() {
            let b = &sys.bumps()[k];
            for (endpoint, s) in [
                (b.right().clone(), sym(k, Sign::Plus)),
                (b.left().clone(), sym(k, Sign::Minus)),
            ] {
                if !u.contains_point(&endpoint) {
                    continue;
                }
                let mut t = sys.markers()[k].clone();
                for reps in 1..=chase_cap {
                    t = sys.apply_sym(&t, s);
                    if u.contains_point(&XRat::Fin(t.clone())) {
                        let mut w = mwords[k].clone();
                        w.syms.extend(std::iter::repeat(s).take(reps));
                        w.syms.extend_from_slice(&tail);
                        chased = Some(local_reduce(sys, &w));
                        break;
                    }
                }
                if chased.is_some() {
                    break;
                }
            }
            if chased.is_some() {
                break;
            }
        }
        if chased.is_some() {
            return chased;
        }
        // 4. expand backwards through a construction foot
        if let Some(k) = (0..sys.bumps().len()).find(|&k| src_star[k].contains(&u)) {
            u = map_interval(sys.bumps()[k].map(), &u, false);
            tail.insert(0, sym(k, Sign::Minus));
            continue;
        }
        if let Some(k) = (0..sys.bumps().len()).find(|&k| dest_star[k].contains(&u)) {
            u = map_interval(sys.bumps()[k].map(), &u, true);
            tail.insert(0, sym(k, Sign::Plus));
            continue;
        }
        // 5. shrink to the larger side of a construction-foot boundary
        let mut boundaries: Vec<Rat> = Vec::new();
        for iv in src_star.iter().chain(dest_star.iter()) {
            for p in [&iv.lo, &iv.hi] {
                if let XRat::Fin(r) = p {
                    if u.contains_point(p) && XRat::Fin(r.clone()) != u.lo && XRat::Fin(r.clone()) != u.hi {
                        boundaries.push(r.clone());
                    }
                }
            }
        }
        boundaries.sort();
        boundaries.dedup();
        let Some(v) = boundaries.first() else {
            return None;
        };
        let left = Interval::new(u.lo.clone(), u.lo_open, XRat::Fin(v.clone()), true);
        let right = Interval::new(XRat::Fin(v.clone()), true, u.hi.clone(), u.hi_open);
        u = match (left, right) {
            (Ok(l), Ok(r)) => {
                let ll = width(&l);
                let rr = width(&r);
                if ll > rr {
                    l
                } else {
                    r
                }
            }
            (Ok(l), Err(_)) => l,
            (Err(_), Ok(r)) => r,
            _ => return None,
        };
    }
    None
}

fn width(iv: &Interval) -> Rat {
    match (&iv.lo, &iv.hi) {
        (XRat::Fin(a), XRat::Fin(b)) => b - a,
        _ => panic!("density search works on bounded intervals"),
    }
}

fn map_interval(map: &PLMap, iv: &Interval, inverse: bool) -> Interval {
    let f = |r: &Rat| -> Rat {
        if inverse {
            map.preimage_rat(r)
        } else {
            map.eval_rat(r)
        }
    };
    match (&iv.lo, &iv.hi) {
        (XRat::Fin(a), XRat::Fin(b)) => Interval::new(
            XRat::Fin(f(a)),
            iv.lo_open,
            XRat::Fin(f(b)),
            iv.hi_open,
        )
        .expect("monotone image of a nonempty interval"),
        _ => panic!("density search works on bounded intervals"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::num::{int, rat};
    use crate::system::default_names;

    fn f2() -> FastSystem {
        FastSystem::new(fixtures::f_chain(2), vec!["h0".into(), "h1".into()]).unwrap()
    }

    fn terminal_two_chain() -> FastSystem {
        let real = crate::diagram::diagram(4, &[(0, 2, "a"), (1, 3, "b")])
            .realize_terminal()
            .unwrap();
        FastSystem::new(real.maps, real.labels).unwrap()
    }

    #[test]
    fn word_parsing_and_reduction() {
        let names = default_names(2);
        let w = Word::parse("g0 g1^-2 g0^3", &names).unwrap();
        assert_eq!(w.len(), 6);
        let wr = Word::parse("g0 g1 g1^-1 g0^-1", &names).unwrap().free_reduce();
        assert!(wr.is_empty());
        assert!(Word::parse("g0^0", &names).is_err());
        assert!(Word::parse("nope", &names).is_err());
    }

    #[test]
    fn free_cancellation_in_local_reduce() {
        let sys = f2();
        let lw = LocalWord::parse("m0 h0 h0^-1", &sys).unwrap();
        let red = local_reduce(&sys, &lw);
        assert!(red.is_empty());
    }

    #[test]
    fn marker_outside_support_drops_symbol() {
        let sys = f2();
        // marker of h0 is 1, outside supt(h1) = (1, inf)
        let lw = LocalWord::parse("m0 h1", &sys).unwrap();
        let red = local_reduce(&sys, &lw);
        assert!(red.is_empty());
        assert_eq!(evaluate_local(&sys, &red), int(1));
    }

    #[test]
    fn chain_word_is_already_reduced() {
        let sys = f2();
        let lw = LocalWord::parse("m0 h0 h1", &sys).unwrap();
        assert!(in_lambda(&sys, &lw));
        assert_eq!(local_reduce(&sys, &lw), lw);
        assert_eq!(evaluate_local(&sys, &lw), int(2));
        let prefix = LocalWord::parse("m0 h0", &sys).unwrap();
        assert_eq!(evaluate_local(&sys, &prefix), rat(3, 2));
    }

    #[test]
    fn revlex_matches_evaluation_on_small_enumeration() {
        for sys in [f2(), terminal_two_chain()] {
            let mut points = enumerate_orbit(&sys, 6);
            points.sort_by(|a, b| revlex_compare(&sys, &a.word, &b.word).unwrap());
            for w in points.windows(2) {
                assert!(
                    w[0].value < w[1].value,
                    "revlex order must agree with evaluation"
                );
            }
        }
    }

    #[test]
    fn transport_of_markers_and_points() {
        let x = f2();
        let y = terminal_two_chain();
        let t = transport_between(&x, &y).unwrap();
        let (img, v) = t.point(&LocalWord::marker_only(0));
        assert!(img.is_empty());
        assert_eq!(v, rat(1, 4));
        let moved = LocalWord::parse("m0 h0", &x).unwrap();
        let (_, v2) = t.point(&moved);
        assert_eq!(v2, rat(1, 2));
    }

    #[test]
    fn f_relators_hold_and_commutator_does_not() {
        let names = default_names(2);
        let g = fixtures::f_generators(2);
        let a = Word::parse("g0 g1^-1", &names).unwrap();
        let b1 = Word::parse("g0^-1 g1 g0", &names).unwrap();
        let b2 = Word::parse("g0^-2 g1 g0^2", &names).unwrap();
        assert!(word_is_identity(&a.commutator(&b1), &g));
        assert!(word_is_identity(&a.commutator(&b2), &g));

        let h = fixtures::f_chain(2);
        let hnames = vec!["h0".to_string(), "h1".to_string()];
        let w = Word::parse("h0 h1 h0^-1 h1^-1", &hnames).unwrap();
        assert!(!word_is_identity(&w, &h));
        let sys = f2();
        let verdict = word_is_identity_checked(&sys, &w, None);
        assert!(!verdict.identity);
        assert!(verdict.moved_point.is_some());
    }

    #[test]
    fn translate_word_through_iso() {
        let x = f2();
        let y = terminal_two_chain();
        let iso = x.diagram().isomorphism_to(y.diagram()).unwrap();
        let w = Word::parse("h0 h1^-1", &x.names().to_vec()).unwrap();
        let out = translate_word(&iso, x.names(), y.names(), &w).unwrap();
        assert_eq!(out.display(&y.names().to_vec()), "a b^-1");
        let e = translate_word(&iso, x.names(), y.names(), &Word::empty()).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn density_covers_the_terminal_two_chain() {
        let sys = terminal_two_chain();
        for i in 0..64i64 {
            let t = Interval::new(
                XRat::Fin(rat(i, 64)),
                false,
                XRat::Fin(rat(i + 1, 64)),
                false,
            )
            .unwrap();
            let w = density_witness(&sys, &t, 64).expect("interval reachable");
            assert!(w.len() <= 20, "word length {} exceeds bound", w.len());
            let v = evaluate_local(&sys, &w);
            assert!(t.contains_point(&XRat::Fin(v)));
        }
    }
}
