//! Resolution by iterated weighted blow-ups, and the singularity scheme it yields.

pub mod letters;
pub mod word;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::blowup::{blow_up, mark_divisor_points, Chart, Direction, DivisorPoint};
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, rat, AlgebraicPoint, Rational};
use crate::newton::{adjoint_polygon, aux_polygon, make_controllable, Weight};
use crate::system::{ConstrainedSystem, Point, SingularityVerdict};

pub use letters::{classify_arc, classify_point, Corner, Family, Letter, PointContext};
pub use word::{is_degenerated, words_equivalent, SchemeWord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolveConfig {
    pub max_depth: usize,
    /// Shear the root system when its adjoint polygon is not controllable.
    pub shear_allowed: bool,
    /// Print `V1`/`C1` letters with the representative `α = −1`.
    pub letter_sign_normalization: bool,
    pub max_shear_candidates: usize,
}

impl Default for ResolveConfig {
    fn default() -> Self {
        Self {
            max_depth: 32,
            shear_allowed: true,
            letter_sign_normalization: true,
            max_shear_candidates: 64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkRole {
    /// A point of an `x` chart line.
    Line,
    /// The point `v = 0` of a `y` chart of the first blow-up.
    Pole,
    /// Intersection with the previous divisor.
    Corner,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mark {
    pub chart: usize,
    pub point: DivisorPoint,
    pub role: MarkRole,
    pub letter: Option<Letter>,
    /// Blow-up node centered at this point.
    pub child: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParentLink {
    pub node: usize,
    pub chart: usize,
    /// Divisor coordinate of the center in the parent chart.
    pub center: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupNode {
    pub id: usize,
    pub depth: usize,
    pub parent: Option<ParentLink>,
    pub weight: Weight,
    pub charts: Vec<Chart>,
    /// The divisor consists of equilibria.
    pub interval: bool,
    pub marks: Vec<Mark>,
    /// Letters of arcs of equilibria, in traversal order.
    pub arcs: Vec<Letter>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionTree {
    /// The system that was resolved, after the optional shear.
    pub system: ConstrainedSystem,
    pub shear: Option<String>,
    pub origin: SingularityVerdict,
    pub nodes: Vec<BlowupNode>,
    pub word: SchemeWord,
}

/// One component of the total divisor per blow-up; corners join a child to its parent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorGraph {
    pub components: Vec<DivisorComponent>,
    pub intersections: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorComponent {
    pub id: usize,
    pub weight: Weight,
    pub closed: bool,
    pub marks: Vec<String>,
}

impl ResolutionTree {
    pub fn is_trivial(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn charts(&self) -> impl Iterator<Item = &Chart> {
        self.nodes.iter().flat_map(|n| n.charts.iter())
    }

    /// Every mark without a child blow-up is elementary.
    pub fn leaves_elementary(&self) -> bool {
        self.nodes
            .iter()
            .flat_map(|n| n.marks.iter())
            .all(|m| m.child.is_some() || m.point.elementary.is_some())
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn divisor_graph(&self) -> DivisorGraph {
        let components = self
            .nodes
            .iter()
            .map(|n| DivisorComponent {
                id: n.id,
                weight: n.weight,
                closed: n.parent.is_none(),
                marks: n
                    .marks
                    .iter()
                    .map(|m| {
                        format!(
                            "{} {} {}",
                            n.charts[m.chart].direction,
                            m.point.t,
                            m.letter.map_or_else(|| "*".to_string(), |l| l.to_string())
                        )
                    })
                    .collect(),
            })
            .collect();
        let intersections = self
            .nodes
            .iter()
            .filter_map(|n| n.parent.as_ref().map(|p| (p.node, n.id)))
            .collect();
        DivisorGraph {
            components,
            intersections,
        }
    }
}

/// Weight of the main segment of the auxiliary polygon, `(1, 1)` when it has none.
pub fn choose_weight(sys: &ConstrainedSystem) -> Result<Weight> {
    match aux_polygon(sys)?.main_weight() {
        Ok(w) => Ok(w),
        Err(Error::NoSlantedSegment) => Ok(Weight { w1: 1, w2: 1 }),
        Err(e) => Err(e),
    }
}

pub fn resolve(sys: &ConstrainedSystem, cfg: &ResolveConfig) -> Result<ResolutionTree> {
    if sys.p.is_zero() && sys.q.is_zero() {
        return Err(Error::DegenerateInput);
    }
    let mut shear = None;
    let mut system = sys.clone();
    if cfg.shear_allowed && !adjoint_polygon(sys)?.is_controllable() {
        let (s, l) = make_controllable(sys, cfg.max_shear_candidates)?;
        if !l.is_zero() {
            shear = Some(format_rational(&l));
        }
        system = s;
    }
    let origin = Point::origin();
    let verdict = system.is_singular_at(&origin);
    let mut b = Builder {
        cfg,
        nodes: Vec::new(),
    };
    let letters = if system.is_elementary_at(&origin).is_some() {
        Vec::new()
    } else {
        b.expand(&system, None, 1, true)?
    };
    Ok(ResolutionTree {
        system,
        shear,
        origin: verdict,
        nodes: b.nodes,
        word: SchemeWord::new(letters),
    })
}

/// A position along a divisor traversal.
enum Item {
    Station(usize),
    /// Arc sample: chart index and divisor coordinate.
    Arc(usize, Rational),
    /// Arc sample at a pole that carries no special point.
    PoleArc(usize),
}

struct Builder<'a> {
    cfg: &'a ResolveConfig,
    nodes: Vec<BlowupNode>,
}

/// A rational strictly between two divisor points; `None` is an infinite end.
fn rational_between(lo: Option<&AlgebraicPoint>, hi: Option<&AlgebraicPoint>) -> Rational {
    match (lo, hi) {
        (None, None) => Rational::zero(),
        (Some(a), None) => a.bounds().1.floor() + Rational::one(),
        (None, Some(b)) => b.bounds().0.ceil() - Rational::one(),
        (Some(a), Some(b)) => {
            let (mut a, mut b) = (a.clone(), b.clone());
            let mut width = rat(1);
            loop {
                let (_, ahi) = a.bounds();
                let (blo, _) = b.bounds();
                if ahi < blo {
                    return (ahi + blo) / rat(2);
                }
                width /= rat(2);
                a.refine(&width);
                b.refine(&width);
            }
        }
    }
}

impl Builder<'_> {
    /// Blows up the origin of `sys` and returns the letters of the new divisor in
    /// traversal order. The root divisor is a closed curve read counterclockwise;
    /// a later divisor is an arc between two corners, read in the direction the
    /// parent traversal passes the center (`ascending`).
    fn expand(
        &mut self,
        sys: &ConstrainedSystem,
        parent: Option<ParentLink>,
        depth: usize,
        ascending: bool,
    ) -> Result<Vec<Letter>> {
        if depth > self.cfg.max_depth {
            return Err(Error::MaxDepthExceeded(self.cfg.max_depth));
        }
        let root = parent.is_none();
        let w = choose_weight(sys)?;
        let dirs: &[Direction] = if root {
            &Direction::ALL
        } else {
            &[Direction::XPos, Direction::YPos, Direction::YNeg]
        };
        let charts = dirs
            .iter()
            .map(|&d| blow_up(sys, w, d))
            .collect::<Result<Vec<_>>>()?;
        let interval = charts[0].is_interval();
        let id = self.nodes.len();
        self.nodes.push(BlowupNode {
            id,
            depth,
            parent,
            weight: w,
            charts,
            interval,
            marks: Vec::new(),
            arcs: Vec::new(),
        });

        let mut items = Vec::new();
        let line_marks = |chart: usize, this: &mut Self| -> Result<Vec<DivisorPoint>> {
            Ok(mark_divisor_points(&this.nodes[id].charts[chart])?.points)
        };
        let origin_point = |chart: usize, this: &Self| {
            this.nodes[id].charts[chart].point(AlgebraicPoint::Rational(Rational::zero()))
        };
        // (mark index, traversal sign, corner role)
        let mut contexts: Vec<(usize, i8, Option<Corner>)> = Vec::new();
        let push_mark = |this: &mut Self, chart: usize, point: DivisorPoint, role: MarkRole| {
            let n = &mut this.nodes[id];
            n.marks.push(Mark {
                chart,
                point,
                role,
                letter: None,
                child: None,
            });
            n.marks.len() - 1
        };
        let line_items = |pts: &[DivisorPoint], idx: &[usize], chart: usize, forward: bool| {
            // Arcs interleaved with stations, in traversal order.
            let mut seq = Vec::new();
            let n = pts.len();
            let order: Vec<usize> = if forward {
                (0..n).collect()
            } else {
                (0..n).rev().collect()
            };
            let bound = |k: Option<usize>| k.map(|k| &pts[k].t);
            let first = order.first().copied();
            let (lo0, hi0) = if forward { (None, bound(first)) } else { (bound(first), None) };
            seq.push(Item::Arc(chart, rational_between(lo0, hi0)));
            for (pos, &k) in order.iter().enumerate() {
                seq.push(Item::Station(idx[k]));
                let next = order.get(pos + 1).copied();
                let (lo, hi) = if forward {
                    (Some(&pts[k].t), bound(next))
                } else {
                    (bound(next), Some(&pts[k].t))
                };
                seq.push(Item::Arc(chart, rational_between(lo, hi)));
            }
            if n > 0 {
                // The leading arc was pushed before the first station; with no
                // stations it is the whole line and must not be duplicated.
            } else {
                seq.truncate(1);
            }
            seq
        };

        if root {
            // x+ line ascending, y+ pole, x- line descending, y- pole.
            let xp = line_marks(0, self)?;
            let xp_idx: Vec<usize> = xp.iter().map(|p| push_mark(self, 0, p.clone(), MarkRole::Line)).collect();
            for &i in &xp_idx {
                contexts.push((i, 1, None));
            }
            items.extend(line_items(&xp, &xp_idx, 0, true));
            let pole = origin_point(2, self);
            if pole.is_special() {
                let i = push_mark(self, 2, pole, MarkRole::Pole);
                contexts.push((i, -1, None));
                items.push(Item::Station(i));
            } else {
                items.push(Item::PoleArc(2));
            }
            let xn = line_marks(1, self)?;
            let xn_idx: Vec<usize> = xn.iter().map(|p| push_mark(self, 1, p.clone(), MarkRole::Line)).collect();
            for &i in xn_idx.iter().rev() {
                contexts.push((i, -1, None));
            }
            items.extend(line_items(&xn, &xn_idx, 1, false));
            let pole = origin_point(3, self);
            if pole.is_special() {
                let i = push_mark(self, 3, pole, MarkRole::Pole);
                contexts.push((i, 1, None));
                items.push(Item::Station(i));
            } else {
                items.push(Item::PoleArc(3));
            }
        } else {
            // y- corner, x+ line, y+ corner; reversed when descending.
            let lower = origin_point(2, self);
            let lower_i = push_mark(self, 2, lower, MarkRole::Corner);
            let xp = line_marks(0, self)?;
            let xp_idx: Vec<usize> = xp.iter().map(|p| push_mark(self, 0, p.clone(), MarkRole::Line)).collect();
            let upper = origin_point(1, self);
            let upper_i = push_mark(self, 1, upper, MarkRole::Corner);
            let dir = if ascending { 1 } else { -1 };
            let (first, last) = if ascending { (lower_i, upper_i) } else { (upper_i, lower_i) };
            contexts.push((first, dir, Some(Corner::ArriveOld)));
            items.push(Item::Station(first));
            let order: Vec<usize> = if ascending {
                xp_idx.clone()
            } else {
                xp_idx.iter().rev().copied().collect()
            };
            for &i in &order {
                contexts.push((i, dir, None));
            }
            items.extend(line_items(&xp, &xp_idx, 0, ascending));
            contexts.push((last, dir, Some(Corner::ArriveNew)));
            items.push(Item::Station(last));
        }

        let stations_ctx: std::collections::HashMap<usize, (i8, Option<Corner>)> = contexts
            .into_iter()
            .map(|(i, d, c)| (i, (d, c)))
            .collect();
        let items = if interval {
            merge_arcs(items, root)
        } else {
            items
                .into_iter()
                .filter(|it| matches!(it, Item::Station(_)))
                .collect()
        };

        let mut out = Vec::new();
        for item in items {
            match item {
                Item::Station(i) => {
                    let (dir, corner) = stations_ctx[&i];
                    out.extend(self.station(id, i, dir, corner, depth)?);
                }
                Item::Arc(chart, t) => {
                    let l = classify_arc(&self.nodes[id].charts[chart].system, &t)?;
                    self.nodes[id].arcs.push(l);
                    out.push(l);
                }
                Item::PoleArc(chart) => {
                    let l = classify_arc(&self.nodes[id].charts[chart].system, &Rational::zero())?;
                    self.nodes[id].arcs.push(l);
                    out.push(l);
                }
            }
        }
        Ok(out)
    }

    /// Letters contributed by one special point: its own letter when elementary,
    /// otherwise the letters of the blow-up centered there.
    fn station(
        &mut self,
        node: usize,
        mark: usize,
        dir: i8,
        corner: Option<Corner>,
        depth: usize,
    ) -> Result<Vec<Letter>> {
        let m = self.nodes[node].marks[mark].clone();
        let system = &self.nodes[node].charts[m.chart].system;
        if m.point.elementary.is_some() {
            let l = classify_point(
                system,
                &m.point.t,
                PointContext { dir, corner },
                self.cfg.letter_sign_normalization,
            )?;
            self.nodes[node].marks[mark].letter = Some(l);
            return Ok(vec![l]);
        }
        if corner.is_some() {
            return Err(Error::UnclassifiableLocalModel(
                "non-elementary corner".to_string(),
            ));
        }
        let t = m
            .point
            .t
            .as_rational()
            .ok_or_else(|| Error::NonRationalCenter(m.point.t.to_string()))?
            .clone();
        let centered = system.translate(&Rational::zero(), &t);
        let link = ParentLink {
            node,
            chart: m.chart,
            center: format_rational(&t),
        };
        self.nodes[node].marks[mark].child = Some(self.nodes.len());
        self.expand(&centered, Some(link), depth + 1, dir > 0)
    }
}

/// Collapses consecutive arc samples into one arc. On the closed root divisor
/// the first and last arcs are the same arc.
fn merge_arcs(items: Vec<Item>, cyclic: bool) -> Vec<Item> {
    let mut out: Vec<Item> = Vec::new();
    for it in items {
        let prev_is_arc = matches!(out.last(), Some(Item::Arc(..) | Item::PoleArc(_)));
        match it {
            Item::Station(_) => out.push(it),
            Item::Arc(..) if prev_is_arc => {}
            Item::PoleArc(_) if prev_is_arc => {
                // Prefer the pole sample, which lies on the merged arc by construction.
                out.pop();
                out.push(it);
            }
            _ => out.push(it),
        }
    }
    if cyclic && out.len() > 1 {
        let first_arc = matches!(out.first(), Some(Item::Arc(..) | Item::PoleArc(_)));
        let last_arc = matches!(out.last(), Some(Item::Arc(..) | Item::PoleArc(_)));
        if first_arc && last_arc {
            let last = out.pop().unwrap();
            if matches!(last, Item::PoleArc(_)) {
                out[0] = last;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum UnknownReason {
    DegeneratedScheme,
    DifferentWords,
    ResolutionFailed(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum EquivalenceVerdict {
    Equivalent,
    Unknown(UnknownReason),
}

impl std::fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UnknownReason::DegeneratedScheme => write!(f, "DegeneratedScheme"),
            UnknownReason::DifferentWords => write!(f, "DifferentWords"),
            UnknownReason::ResolutionFailed(e) => write!(f, "ResolutionFailed ({e})"),
        }
    }
}

/// Equal non-degenerated schemes imply orientation preserving orbital
/// equivalence; anything else is reported as unknown.
pub fn decide_equivalence(
    a: &ConstrainedSystem,
    b: &ConstrainedSystem,
    cfg: &ResolveConfig,
) -> Result<(EquivalenceVerdict, Option<SchemeWord>, Option<SchemeWord>)> {
    let ra = resolve(a, cfg);
    let rb = resolve(b, cfg);
    let (ta, tb) = match (ra, rb) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) if e.is_resolution() => {
            return Ok((
                EquivalenceVerdict::Unknown(UnknownReason::ResolutionFailed(e.to_string())),
                None,
                None,
            ))
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let verdict = if is_degenerated(&ta.word) || is_degenerated(&tb.word) {
        EquivalenceVerdict::Unknown(UnknownReason::DegeneratedScheme)
    } else if words_equivalent(&ta.word, &tb.word) {
        EquivalenceVerdict::Equivalent
    } else {
        EquivalenceVerdict::Unknown(UnknownReason::DifferentWords)
    };
    Ok((verdict, Some(ta.word), Some(tb.word)))
}

/// The scheme word of the singularity at the origin.
pub fn scheme_word(tree: &ResolutionTree) -> &SchemeWord {
    &tree.word
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::pullback_identity_check;

    fn sys(a: &str, b: &str, d: &str) -> ConstrainedSystem {
        ConstrainedSystem::parse(a, b, d).unwrap()
    }

    #[test]
    fn cusp_word() {
        let t = resolve(&sys("y", "x^2", "x*y"), &ResolveConfig::default()).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.nodes[0].weight, Weight { w1: 2, w2: 3 });
        let expected: SchemeWord = "C3+ V1-+ C3+ V1-+ C3+ C3-".parse().unwrap();
        assert!(words_equivalent(&t.word, &expected), "got {}", t.word);
        assert!(t.leaves_elementary());
        assert!(t.charts().all(pullback_identity_check));
    }

    #[test]
    fn elementary_origin_is_trivial() {
        let t = resolve(&sys("x", "-y", "y"), &ResolveConfig::default()).unwrap();
        assert!(t.is_trivial());
        assert!(t.word.is_empty());
    }

    #[test]
    fn center_gives_degenerated_word() {
        let t = resolve(&sys("-y", "x", "x"), &ResolveConfig::default()).unwrap();
        assert_eq!(t.nodes[0].weight, Weight { w1: 1, w2: 1 });
        assert!(is_degenerated(&t.word), "got {}", t.word);
        assert!(!t.word.is_empty());
    }

    #[test]
    fn depth_limit() {
        let cfg = ResolveConfig {
            max_depth: 1,
            ..ResolveConfig::default()
        };
        // Three nodes at depth two.
        let s = sys("y^3 + x^2*y", "x*y + x^4", "y");
        assert!(matches!(resolve(&s, &cfg), Err(Error::MaxDepthExceeded(1))));
        let tree = resolve(&s, &ResolveConfig::default()).unwrap();
        assert_eq!(tree.depth(), 2);
        assert!(tree.leaves_elementary());
    }

    #[test]
    fn radial_node_gives_interval_letter() {
        let t = resolve(&sys("x^3 + x*y^2", "x^2*y + y^3", "1"), &ResolveConfig::default()).unwrap();
        assert!(t.nodes[0].interval);
        assert_eq!(t.word.to_string(), "V4+");
    }

    #[test]
    fn self_equivalence() {
        let s = sys("y", "x^2", "x*y");
        let (v, _, _) = decide_equivalence(&s, &s, &ResolveConfig::default()).unwrap();
        assert_eq!(v, EquivalenceVerdict::Equivalent);
        let c = sys("-y", "x", "x");
        let (v, _, _) = decide_equivalence(&c, &c, &ResolveConfig::default()).unwrap();
        assert_eq!(v, EquivalenceVerdict::Unknown(UnknownReason::DegeneratedScheme));
    }
}
