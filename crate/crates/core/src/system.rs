//! A geometrically fast generating family bundled with everything the
//! symbolic machinery needs: bumps in canonical enumeration, the canonical
//! marking and its feet in line order, the dynamical diagram, the initial
//! markers, and the purely combinatorial adjacency tables that drive local
//! reduction.

use crate::diagram::{DiagramEdge, DynamicalDiagram};
use crate::error::{Error, Result};
use crate::fastness::{
    bumps_used, canonical_marking, fastness_report, feet_disjoint, FootPair,
};
use crate::interval::Interval;
use crate::num::{Rat, XRat};
use crate::plmap::{Bump, PLMap, Sign};

/// A signed bump symbol: `2 * bump` is the positive symbol, `2 * bump + 1`
/// its inverse.
pub type Sym = usize;

pub fn sym(bump: usize, sign: Sign) -> Sym {
    2 * bump
        + match sign {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
}

pub fn sym_bump(s: Sym) -> usize {
    s / 2
}

pub fn sym_is_positive(s: Sym) -> bool {
    s % 2 == 0
}

pub fn sym_inverse(s: Sym) -> Sym {
    s ^ 1
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Src,
    Dest,
}

pub struct FastSystem {
    names: Vec<String>,
    generators: Vec<PLMap>,
    bumps: Vec<Bump>,
    bump_names: Vec<String>,
    /// Per generator: its signed bumps as (bump index, sign).
    gen_bumps: Vec<Vec<(usize, Sign)>>,
    markers: Vec<Rat>,
    feet: Vec<FootPair>,
    /// The 2m feet in line order.
    foot_order: Vec<(usize, Side)>,
    /// Foot line position per bump: [src position, dest position].
    foot_pos: Vec<[usize; 2]>,
    /// Bumps owning an initial marker, sorted by marker value.
    initial_bumps: Vec<usize>,
    diagram: DynamicalDiagram,
    /// Merged line positions of feet and initial markers.
    sym_dest_pos: Vec<usize>,
    sym_src_pos: Vec<usize>,
    marker_pos: Vec<usize>,
    /// next_ok[a][b]: the two-symbol string "ab" is locally reduced.
    next_ok: Vec<Vec<bool>>,
    /// marker_ok[i][b]: the initial marker i lies in supt(b) minus src(b).
    marker_ok: Vec<Vec<bool>>,
}

impl FastSystem {
    /// Builds the system, rejecting families that are not geometrically
    /// fast; the error carries the properness witness or the failing
    /// chain inequality.
    pub fn new(generators: Vec<PLMap>, names: Vec<String>) -> Result<FastSystem> {
        assert_eq!(generators.len(), names.len());
        if let Some(v) = crate::fastness::properness_violation(&generators) {
            return Err(Error::NotProper(v.point, v.members, v.side));
        }
        let (family, gen_bumps_raw) = bumps_used(&generators);
        let report = fastness_report(&family);
        if let Some(v) = report.violation {
            return Err(Error::NotProper(v.point, v.members, v.side));
        }
        if !report.fast {
            let bad = report.chains.iter().find(|c| !c.ok).expect("some chain fails");
            return Err(Error::NotFast(
                bad.members.clone(),
                XRat::Fin(bad.c_min.clone()),
                XRat::Fin(bad.c_max.clone()),
                XRat::Fin(bad.image.clone()),
            ));
        }
        let marking = canonical_marking(&family)?;
        let feet: Vec<FootPair> = marking
            .feet()
            .expect("fast families mark inside their orbitals")
            .to_vec();
        assert!(
            feet_disjoint(&feet),
            "canonical marking of a fast family has disjoint feet"
        );
        let bumps: Vec<Bump> = family.bumps().to_vec();
        let m = bumps.len();

        // generator -> signed bumps, reindexed into the canonical family
        let gen_bumps: Vec<Vec<(usize, Sign)>> = gen_bumps_raw;

        let mut bump_names = vec![String::new(); m];
        for (g, list) in gen_bumps.iter().enumerate() {
            let single = list.len() == 1 && list[0].1 == Sign::Plus;
            for (ordinal, (b, _)) in list.iter().enumerate() {
                bump_names[*b] = if single {
                    names[g].clone()
                } else {
                    format!("{}.{}", names[g], ordinal)
                };
            }
        }

        let mut foot_order: Vec<(usize, Side)> = (0..m)
            .flat_map(|k| [(k, Side::Src), (k, Side::Dest)])
            .collect();
        foot_order.sort_by(|a, b| foot_interval(&feet, *a).cmp_disjoint(foot_interval(&feet, *b)));
        let mut foot_pos = vec![[0usize; 2]; m];
        for (pos, &(k, side)) in foot_order.iter().enumerate() {
            foot_pos[k][side_index(side)] = pos;
        }

        let initial_bumps: Vec<usize> = {
            let mut v: Vec<usize> = (0..m).filter(|&k| marking.initial[k]).collect();
            v.sort_by(|a, b| marking.markers[*a].cmp(&marking.markers[*b]));
            v
        };
        for &k in &initial_bumps {
            let p = XRat::Fin(marking.markers[k].clone());
            assert!(
                feet.iter().all(|f| !f.src.contains_point(&p) && !f.dest.contains_point(&p)),
                "initial markers avoid all feet"
            );
        }

        // dynamical diagram: one edge per signed bump, labeled by its
        // generator, directed src -> dest of the signed bump
        let mut edges = Vec::new();
        for (g, list) in gen_bumps.iter().enumerate() {
            for &(b, sign) in list {
                let (src_side, dst_side) = match sign {
                    Sign::Plus => (Side::Src, Side::Dest),
                    Sign::Minus => (Side::Dest, Side::Src),
                };
                edges.push(DiagramEdge {
                    src: foot_pos[b][side_index(src_side)],
                    dst: foot_pos[b][side_index(dst_side)],
                    label: names[g].clone(),
                });
            }
        }
        let diagram = DynamicalDiagram::new(2 * m, edges)?;

        // merged order of feet and initial markers for the symbolic tables
        let mut entries: Vec<(Interval, MergedRef)> = Vec::new();
        for (pos, &(k, side)) in foot_order.iter().enumerate() {
            let _ = pos;
            entries.push((
                foot_interval(&feet, (k, side)).clone(),
                MergedRef::Foot(k, side),
            ));
        }
        for (i, &k) in initial_bumps.iter().enumerate() {
            entries.push((
                Interval::point(XRat::Fin(marking.markers[k].clone())),
                MergedRef::Marker(i),
            ));
        }
        entries.sort_by(|a, b| a.0.cmp_disjoint(&b.0));
        let mut sym_dest_pos = vec![0usize; 2 * m];
        let mut sym_src_pos = vec![0usize; 2 * m];
        let mut marker_pos = vec![0usize; initial_bumps.len()];
        for (pos, (_, r)) in entries.iter().enumerate() {
            match *r {
                MergedRef::Foot(k, Side::Src) => {
                    sym_src_pos[sym(k, Sign::Plus)] = pos;
                    sym_dest_pos[sym(k, Sign::Minus)] = pos;
                }
                MergedRef::Foot(k, Side::Dest) => {
                    sym_dest_pos[sym(k, Sign::Plus)] = pos;
                    sym_src_pos[sym(k, Sign::Minus)] = pos;
                }
                MergedRef::Marker(i) => marker_pos[i] = pos,
            }
        }

        let sys = FastSystem {
            names,
            generators,
            bumps,
            bump_names,
            gen_bumps,
            markers: marking.markers,
            feet,
            foot_order,
            foot_pos,
            initial_bumps,
            diagram,
            sym_dest_pos,
            sym_src_pos,
            marker_pos,
            next_ok: Vec::new(),
            marker_ok: Vec::new(),
        };
        Ok(sys.build_tables())
    }

    fn build_tables(mut self) -> FastSystem {
        let m2 = 2 * self.bumps.len();
        let mut next_ok = vec![vec![false; m2]; m2];
        for a in 0..m2 {
            for b in 0..m2 {
                if b == sym_inverse(a) {
                    continue;
                }
                // combinatorial route: dest(a) strictly between the feet
                // of b in the merged line order, or a == b
                let by_order = a == b || {
                    let d = self.sym_dest_pos[a];
                    let lo = self.sym_src_pos[b].min(self.sym_dest_pos[b]);
                    let hi = self.sym_src_pos[b].max(self.sym_dest_pos[b]);
                    lo < d && d < hi
                };
                // interval route: dest(a) inside supt(b) and off src(b)
                let by_intervals = {
                    let dest_a = self.sym_dest_interval(a);
                    let supt = self.bumps[sym_bump(b)].support();
                    supt.contains(dest_a) && dest_a.disjoint(self.sym_src_interval(b))
                };
                assert_eq!(
                    by_order, by_intervals,
                    "diagram-order test must match interval containment"
                );
                next_ok[a][b] = by_order;
            }
        }
        let mut marker_ok = vec![vec![false; m2]; self.initial_bumps.len()];
        for (i, &k) in self.initial_bumps.iter().enumerate() {
            let v = XRat::Fin(self.markers[k].clone());
            for b in 0..m2 {
                let by_order = {
                    let d = self.marker_pos[i];
                    let lo = self.sym_src_pos[b].min(self.sym_dest_pos[b]);
                    let hi = self.sym_src_pos[b].max(self.sym_dest_pos[b]);
                    lo < d && d < hi
                };
                let by_intervals = self.bumps[sym_bump(b)].support().contains_point(&v)
                    && !self.sym_src_interval(b).contains_point(&v);
                assert_eq!(by_order, by_intervals);
                marker_ok[i][b] = by_order;
            }
        }
        self.next_ok = next_ok;
        self.marker_ok = marker_ok;
        self
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[PLMap] {
        &self.generators
    }

    pub fn bumps(&self) -> &[Bump] {
        &self.bumps
    }

    pub fn bump_names(&self) -> &[String] {
        &self.bump_names
    }

    pub fn gen_bumps(&self) -> &[Vec<(usize, Sign)>] {
        &self.gen_bumps
    }

    pub fn markers(&self) -> &[Rat] {
        &self.markers
    }

    pub fn feet(&self) -> &[FootPair] {
        &self.feet
    }

    pub fn foot_order(&self) -> &[(usize, Side)] {
        &self.foot_order
    }

    pub fn foot_position(&self, bump: usize, side: Side) -> usize {
        self.foot_pos[bump][side_index(side)]
    }

    pub fn diagram(&self) -> &DynamicalDiagram {
        &self.diagram
    }

    /// Bumps with initial markers, sorted by marker value.
    pub fn initial_bumps(&self) -> &[usize] {
        &self.initial_bumps
    }

    pub fn initial_marker_value(&self, i: usize) -> &Rat {
        &self.markers[self.initial_bumps[i]]
    }

    pub fn sym_count(&self) -> usize {
        2 * self.bumps.len()
    }

    pub fn sym_name(&self, s: Sym) -> String {
        if sym_is_positive(s) {
            self.bump_names[sym_bump(s)].clone()
        } else {
            format!("{}^-1", self.bump_names[sym_bump(s)])
        }
    }

    pub fn sym_dest_interval(&self, s: Sym) -> &Interval {
        let f = &self.feet[sym_bump(s)];
        if sym_is_positive(s) {
            &f.dest
        } else {
            &f.src
        }
    }

    pub fn sym_src_interval(&self, s: Sym) -> &Interval {
        let f = &self.feet[sym_bump(s)];
        if sym_is_positive(s) {
            &f.src
        } else {
            &f.dest
        }
    }

    /// Merged line position of dest(s); the reverse-lexicographic symbol
    /// order compares these.
    pub fn sym_dest_position(&self, s: Sym) -> usize {
        self.sym_dest_pos[s]
    }

    pub fn marker_position(&self, i: usize) -> usize {
        self.marker_pos[i]
    }

    /// Is the two-symbol string "ab" locally reduced?
    pub fn pair_ok(&self, a: Sym, b: Sym) -> bool {
        self.next_ok[a][b]
    }

    /// Is the marker-then-b string locally reduced?
    pub fn marker_pair_ok(&self, marker: usize, b: Sym) -> bool {
        self.marker_ok[marker][b]
    }

    pub fn apply_sym(&self, t: &Rat, s: Sym) -> Rat {
        let map = self.bumps[sym_bump(s)].map();
        if sym_is_positive(s) {
            map.eval_rat(t)
        } else {
            map.preimage_rat(t)
        }
    }

    pub fn marker_index_by_name(&self, token: &str) -> Result<usize> {
        token
            .strip_prefix('m')
            .and_then(|rest| rest.parse::<usize>().ok())
            .filter(|&i| i < self.initial_bumps.len())
            .ok_or_else(|| Error::UnknownMarker(token.to_string()))
    }

    pub fn marker_name(&self, i: usize) -> String {
        format!("m{i}")
    }

    pub fn bump_index_by_name(&self, name: &str) -> Result<usize> {
        self.bump_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn generator_index_by_name(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }
}

fn side_index(s: Side) -> usize {
    match s {
        Side::Src => 0,
        Side::Dest => 1,
    }
}

fn foot_interval(feet: &[FootPair], (k, side): (usize, Side)) -> &Interval {
    match side {
        Side::Src => &feet[k].src,
        Side::Dest => &feet[k].dest,
    }
}

enum MergedRef {
    Foot(usize, Side),
    Marker(usize),
}

/// The dynamical diagram of a fast family (canonical marking, feet in line
/// order, one labeled edge per signed bump). Rejects non-fast input with
/// the failing chain report.
pub fn diagram_of(generators: &[PLMap], names: &[String]) -> Result<DynamicalDiagram> {
    Ok(FastSystem::new(generators.to_vec(), names.to_vec())?
        .diagram()
        .clone())
}

/// Like `diagram_of` with the default names g0, g1, ...
pub fn diagram_of_unnamed(generators: &[PLMap]) -> Result<DynamicalDiagram> {
    diagram_of(generators, &default_names(generators.len()))
}

pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("g{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::diagram;
    use crate::fixtures;
    use crate::num::{int, rat};

    fn f2_system() -> FastSystem {
        FastSystem::new(fixtures::f_chain(2), vec!["h0".into(), "h1".into()]).unwrap()
    }

    #[test]
    fn f2_chain_diagram_matches_expected_shape() {
        let sys = f2_system();
        assert_eq!(sys.markers(), &[int(1), rat(3, 2)]);
        assert_eq!(sys.initial_bumps(), &[0]);
        let expected = diagram(4, &[(0, 2, "h0"), (1, 3, "h1")]);
        assert_eq!(sys.diagram(), &expected);
    }

    #[test]
    fn brin_navas_diagram_matches_figure() {
        let (maps, names) = fixtures::brin_navas();
        let d = diagram_of(&maps, &names).unwrap();
        let expected = diagram(
            6,
            &[(2, 0, "f"), (3, 5, "f"), (4, 1, "g")],
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn single_bump_diagram() {
        let maps = vec![fixtures::geofast_pair().remove(0)];
        let d = diagram_of_unnamed(&maps).unwrap();
        assert_eq!(d, diagram(2, &[(0, 1, "g0")]));
    }

    #[test]
    fn non_fast_input_is_rejected_with_chain_report() {
        let (slowed, h1) = fixtures::slowed_pair();
        let err = diagram_of_unnamed(&[slowed, h1]).unwrap_err();
        match err {
            Error::NotFast(members, c_min, c_max, image) => {
                assert_eq!(members, vec![0, 1]);
                assert_eq!(c_min, XRat::of(1, 1));
                assert_eq!(c_max, XRat::of(2, 1));
                assert_eq!(image, XRat::of(3, 2));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn power_families_share_the_diagram() {
        let h = fixtures::f_chain(2);
        let powered = vec![h[0].pow(3), h[1].pow(2)];
        let d1 = diagram_of_unnamed(&h).unwrap();
        let d2 = diagram_of_unnamed(&powered).unwrap();
        assert!(d1.isomorphism_to(&d2).is_some());
    }

    #[test]
    fn terminal_realization_round_trips() {
        let d = diagram(4, &[(0, 2, "a"), (1, 3, "b")]);
        let real = d.realize_terminal().unwrap();
        let got = diagram_of(&real.maps, &real.labels).unwrap();
        assert!(got.isomorphism_to(&d).is_some());
    }
}
