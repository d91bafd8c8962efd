//! Logarithmic supports, Newton polygons, weights and coordinate normalizations.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{div_exact, rat, ratio, sign, Poly, Rational, Var};
use crate::system::ConstrainedSystem;

pub type LatticePoint = (i64, i64);

/// Points `(m, n)` of the expansion `Σ x^m y^n (a·x∂ₓ + b·y∂ᵧ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Support {
    pub points: BTreeSet<LatticePoint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Weight {
    pub w1: u32,
    pub w2: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub start: LatticePoint,
    pub end: LatticePoint,
    /// Primitive inward normal.
    pub normal: Weight,
    /// `ω₁·r + ω₂·s` along the segment.
    pub level: i64,
}

/// Lower-left boundary of the convex envelope of `Q + ℝ²₊`. Besides the
/// listed finite segments the boundary has a vertical ray above the first
/// vertex and a horizontal ray right of the last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub vertices: Vec<LatticePoint>,
    pub segments: Vec<Segment>,
    /// Index of the main vertex in `vertices`.
    pub main: usize,
}

impl Weight {
    pub fn new(w1: i64, w2: i64) -> Result<Self> {
        if w1 < 1 || w2 < 1 || w1 > u32::MAX as i64 || w2 > u32::MAX as i64 {
            return Err(Error::NonPositiveWeight(w1, w2));
        }
        Ok(Self {
            w1: w1 as u32,
            w2: w2 as u32,
        })
    }

    pub fn swapped(self) -> Self {
        Self {
            w1: self.w2,
            w2: self.w1,
        }
    }

    pub fn level(&self, pt: LatticePoint) -> i64 {
        self.w1 as i64 * pt.0 + self.w2 as i64 * pt.1
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.w1, self.w2)
    }
}

impl Support {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, pt: LatticePoint) -> bool {
        self.points.contains(&pt)
    }

    pub fn shifted(&self, dr: i64, ds: i64) -> Support {
        Support {
            points: self.points.iter().map(|&(r, s)| (r + dr, s + ds)).collect(),
        }
    }

    /// `{ p + q : p ∈ self, q ∈ other }`.
    pub fn minkowski(&self, other: &BTreeSet<LatticePoint>) -> Support {
        let mut points = BTreeSet::new();
        for &(a, b) in &self.points {
            for &(c, d) in other {
                points.insert((a + c, b + d));
            }
        }
        Support { points }
    }
}

/// Log point of the `x^i y^j` term of the first component.
pub fn log_point_p(i: u32, j: u32) -> LatticePoint {
    (i as i64 - 1, j as i64)
}

/// Log point of the `x^i y^j` term of the second component.
pub fn log_point_q(i: u32, j: u32) -> LatticePoint {
    (i as i64, j as i64 - 1)
}

pub fn log_support(p: &Poly, q: &Poly) -> Support {
    let mut points = BTreeSet::new();
    for (&(i, j), _) in p.terms() {
        points.insert(log_point_p(i, j));
    }
    for (&(i, j), _) in q.terms() {
        points.insert(log_point_q(i, j));
    }
    Support { points }
}

/// Exponent set of a polynomial.
pub fn monomial_support(p: &Poly) -> BTreeSet<LatticePoint> {
    p.terms().map(|(&(i, j), _)| (i as i64, j as i64)).collect()
}

pub fn polygon(q: &Support) -> Result<NewtonPolygon> {
    let first = {
        let rmin = q.points.iter().map(|p| p.0).min().ok_or(Error::EmptySupport)?;
        let smin = q.points.iter().filter(|p| p.0 == rmin).map(|p| p.1).min().unwrap();
        (rmin, smin)
    };
    let mut vertices = vec![first];
    let mut segments = Vec::new();
    let mut cur = first;
    loop {
        // Steepest descent from the current vertex; ties go to the farthest point.
        let mut best: Option<LatticePoint> = None;
        for &p in q.points.iter().filter(|p| p.0 > cur.0 && p.1 < cur.1) {
            best = match best {
                None => Some(p),
                Some(b) => {
                    // compare slopes (p.1-cur.1)/(p.0-cur.0) vs (b.1-cur.1)/(b.0-cur.0)
                    let lhs = (p.1 - cur.1) * (b.0 - cur.0);
                    let rhs = (b.1 - cur.1) * (p.0 - cur.0);
                    if lhs < rhs || (lhs == rhs && p.0 > b.0) {
                        Some(p)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let Some(next) = best else { break };
        let (dr, ds) = (next.0 - cur.0, next.1 - cur.1);
        let g = dr.gcd(&ds);
        let normal = Weight {
            w1: (-ds / g) as u32,
            w2: (dr / g) as u32,
        };
        segments.push(Segment {
            start: cur,
            end: next,
            normal,
            level: normal.level(cur),
        });
        vertices.push(next);
        cur = next;
    }
    // Main vertex: the lowest vertex in the half-plane r ≤ 0, else the leftmost.
    let main = vertices.iter().rposition(|v| v.0 <= 0).unwrap_or(0);
    Ok(NewtonPolygon {
        vertices,
        segments,
        main,
    })
}

impl NewtonPolygon {
    pub fn main_vertex(&self) -> LatticePoint {
        self.vertices[self.main]
    }

    pub fn height(&self) -> i64 {
        self.main_vertex().1
    }

    /// The segment leaving the main vertex; `None` when it is the horizontal ray.
    pub fn main_segment(&self) -> Option<&Segment> {
        self.segments.get(self.main)
    }

    pub fn is_controllable(&self) -> bool {
        matches!(self.main_vertex().0, 0 | -1)
    }

    pub fn is_newton_elementary(&self) -> bool {
        self.height() <= 0 || self.main_segment().is_none()
    }

    pub fn main_weight(&self) -> Result<Weight> {
        self.main_segment()
            .map(|s| s.normal)
            .ok_or(Error::NoSlantedSegment)
    }

    /// Whether `pt` lies on one of the finite slanted segments.
    pub fn on_slanted_segment(&self, pt: LatticePoint) -> Option<usize> {
        self.segments.iter().position(|s| {
            s.normal.level(pt) == s.level && pt.0 >= s.start.0 && pt.0 <= s.end.0
        })
    }

    /// SVG drawing: lattice grid, support dots, boundary, main segment highlighted.
    pub fn to_svg(&self, support: &Support) -> String {
        const CELL: i64 = 40;
        let rmin = support.points.iter().map(|p| p.0).min().unwrap_or(0).min(-1) - 1;
        let smin = support.points.iter().map(|p| p.1).min().unwrap_or(0).min(-1) - 1;
        let rmax = support.points.iter().map(|p| p.0).max().unwrap_or(0).max(1) + 2;
        let smax = support.points.iter().map(|p| p.1).max().unwrap_or(0).max(1) + 2;
        let px = |r: i64| (r - rmin) * CELL;
        let py = |s: i64| (smax - s) * CELL;
        let (w, h) = (px(rmax), py(smin));
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        for r in rmin..=rmax {
            let _ = writeln!(
                out,
                r##"<line class="grid" x1="{0}" y1="0" x2="{0}" y2="{h}" stroke="#ddd"/>"##,
                px(r)
            );
        }
        for s in smin..=smax {
            let _ = writeln!(
                out,
                r##"<line class="grid" x1="0" y1="{0}" x2="{w}" y2="{0}" stroke="#ddd"/>"##,
                py(s)
            );
        }
        let _ = writeln!(
            out,
            r##"<line class="axis" x1="{0}" y1="0" x2="{0}" y2="{h}" stroke="#888"/>"##,
            px(0)
        );
        let _ = writeln!(
            out,
            r##"<line class="axis" x1="0" y1="{0}" x2="{w}" y2="{0}" stroke="#888"/>"##,
            py(0)
        );
        let first = self.vertices[0];
        let last = *self.vertices.last().unwrap();
        let _ = writeln!(
            out,
            r##"<line class="ray" x1="{0}" y1="{1}" x2="{0}" y2="0" stroke="#000" stroke-width="2"/>"##,
            px(first.0),
            py(first.1)
        );
        let _ = writeln!(
            out,
            r##"<line class="ray" x1="{0}" y1="{1}" x2="{w}" y2="{1}" stroke="#000" stroke-width="2"/>"##,
            px(last.0),
            py(last.1)
        );
        for (k, seg) in self.segments.iter().enumerate() {
            let (class, color) = if k == self.main {
                ("segment main", "#c00")
            } else {
                ("segment", "#000")
            };
            let _ = writeln!(
                out,
                r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="3"/>"#,
                px(seg.start.0),
                py(seg.start.1),
                px(seg.end.0),
                py(seg.end.1)
            );
        }
        for &(r, s) in &support.points {
            let _ = writeln!(
                out,
                r#"<circle class="support" cx="{}" cy="{}" r="5"/>"#,
                px(r),
                py(s)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

pub fn adjoint_polygon(sys: &ConstrainedSystem) -> Result<NewtonPolygon> {
    polygon(&log_support(&sys.p, &sys.q))
}

pub fn aux_support(sys: &ConstrainedSystem) -> Support {
    let (a, b) = sys.auxiliary();
    log_support(&a, &b)
}

pub fn aux_polygon(sys: &ConstrainedSystem) -> Result<NewtonPolygon> {
    polygon(&aux_support(sys))
}

/// Quasi-homogeneous component of `(p, q)` on the level `ω₁r + ω₂s = d`.
pub fn d_level(p: &Poly, q: &Poly, w: Weight, d: i64) -> (Poly, Poly) {
    let pick = |f: &Poly, lp: fn(u32, u32) -> LatticePoint| {
        Poly::from_terms(
            f.terms()
                .filter(|(&(i, j), _)| w.level(lp(i, j)) == d)
                .map(|(&k, c)| (k, c.clone())),
        )
    };
    (pick(p, log_point_p), pick(q, log_point_q))
}

/// Shear `x = x̄ + λȳ, y = ȳ`.
pub fn shear(sys: &ConstrainedSystem, lambda: &Rational) -> ConstrainedSystem {
    let sx = &Poly::x() + &Poly::y().scale(lambda);
    let sy = Poly::y();
    let p = sys.p.substitute(&sx, &sy);
    let q = sys.q.substitute(&sx, &sy);
    ConstrainedSystem {
        p: &p - &q.scale(lambda),
        q,
        delta: sys.delta.substitute(&sx, &sy),
        reduced: sys.reduced,
    }
}

/// Candidate shear parameters in search order: 0, 1, −1, 2, −2, … then ±1/2, ±1/3, …
pub fn shear_candidates(max_candidates: usize) -> impl Iterator<Item = Rational> {
    let ints = (0i64..).flat_map(|n| {
        if n == 0 {
            vec![rat(0)]
        } else {
            vec![rat(n), rat(-n)]
        }
    });
    let half = max_candidates / 2;
    let fracs = (2i64..).flat_map(|d| vec![ratio(1, d), ratio(-1, d)]);
    ints.take(half.max(1)).chain(fracs).take(max_candidates)
}

/// Shears until the adjoint polygon is controllable.
pub fn make_controllable(
    sys: &ConstrainedSystem,
    max_candidates: usize,
) -> Result<(ConstrainedSystem, Rational)> {
    for lambda in shear_candidates(max_candidates) {
        let s = if lambda.is_zero() {
            sys.clone()
        } else {
            shear(sys, &lambda)
        };
        if adjoint_polygon(&s)?.is_controllable() {
            return Ok((s, lambda));
        }
    }
    Err(Error::ShearExhausted(max_candidates))
}

/// Coordinates in which the impasse set is `{y = 0}` and `δ = y`.
///
/// The result is locally orbitally equivalent to the input: the unit cofactor
/// of `δ` is replaced by its sign at the origin.
pub fn favorable_coordinates(sys: &ConstrainedSystem) -> Result<ConstrainedSystem> {
    let zero = Rational::zero();
    if !sys.delta.eval(&zero, &zero).is_zero() {
        return Err(Error::Precondition("origin is not on the impasse set".into()));
    }
    let dx0 = sys.delta.partial_dx().eval(&zero, &zero);
    let dy0 = sys.delta.partial_dy().eval(&zero, &zero);
    if dx0.is_zero() && dy0.is_zero() {
        return Err(Error::SingularImpasse);
    }
    let sys = if dy0.is_zero() {
        // x = -ȳ, y = x̄
        let sx = -Poly::y();
        let sy = Poly::x();
        ConstrainedSystem {
            p: sys.q.substitute(&sx, &sy),
            q: -sys.p.substitute(&sx, &sy),
            delta: sys.delta.substitute(&sx, &sy),
            reduced: sys.reduced,
        }
    } else {
        sys.clone()
    };
    let delta = &sys.delta;
    let dy0 = delta.partial_dy().eval(&zero, &zero);
    let n = delta.degree_in(Var::X).unwrap_or(0);
    // Power-series solution of δ(x, f(x)) = 0, truncated at the x-degree of δ.
    let mut f = Poly::zero();
    for k in 1..=n {
        let r = delta.substitute(&Poly::x(), &f).coeff(k, 0);
        if !r.is_zero() {
            f = &f + &Poly::monomial(-r / &dy0, k, 0);
        }
    }
    if !delta.substitute(&Poly::x(), &f).is_zero() {
        return Err(Error::ImpasseNotGraph);
    }
    let sy = &Poly::y() + &f;
    let p = sys.p.substitute(&Poly::x(), &sy);
    let q0 = sys.q.substitute(&Poly::x(), &sy);
    let q = &q0 - &(&f.partial_dx() * &p);
    let moved = delta.substitute(&Poly::x(), &sy);
    let unit = div_exact(&moved, &Poly::y()).ok_or(Error::ImpasseNotGraph)?;
    let s = rat(sign(&unit.constant_term()) as i64);
    debug_assert!(!s.is_zero());
    ConstrainedSystem::new(p.scale(&s), q.scale(&s), Poly::y())
}

pub fn is_favorable(sys: &ConstrainedSystem) -> bool {
    sys.delta == Poly::y()
}
