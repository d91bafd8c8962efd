//! Letters of the singularity scheme and their classification on a chart divisor.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::{rat, sign, AlgebraicPoint, Line, Poly, Rational, UniPoly};
use crate::system::{ConstrainedSystem, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    V1,
    V2,
    V3,
    V4,
    C1,
    C2,
    C3,
    C4,
}

impl Family {
    pub fn has_beta(self) -> bool {
        matches!(self, Family::V1 | Family::V2 | Family::C1 | Family::C2)
    }

    fn name(self) -> &'static str {
        match self {
            Family::V1 => "V1",
            Family::V2 => "V2",
            Family::V3 => "V3",
            Family::V4 => "V4",
            Family::C1 => "C1",
            Family::C2 => "C2",
            Family::C3 => "C3",
            Family::C4 => "C4",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub family: Family,
    pub alpha: i8,
    pub beta: Option<i8>,
}

impl Letter {
    pub fn new(family: Family, alpha: i8, beta: Option<i8>) -> Result<Self> {
        let ok_sign = |s: i8| s == 1 || s == -1;
        if !ok_sign(alpha) || family.has_beta() != beta.is_some() || beta.is_some_and(|b| !ok_sign(b)) {
            return Err(Error::UnclassifiableLocalModel(format!(
                "invalid signs for {}",
                family.name()
            )));
        }
        Ok(Self {
            family,
            alpha,
            beta,
        })
    }

    /// Identifies `(α, β)` with `(−α, −β)` for the hyperbolic families by
    /// choosing the representative with `α = −1`.
    pub fn normalized(self) -> Self {
        match (self.family, self.beta) {
            (Family::V1 | Family::C1, Some(b)) if self.alpha == 1 => Self {
                alpha: -1,
                beta: Some(-b),
                ..self
            },
            _ => self,
        }
    }
}

fn sign_char(s: i8) -> char {
    if s > 0 {
        '+'
    } else {
        '-'
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.name(), sign_char(self.alpha))?;
        if let Some(b) = self.beta {
            write!(f, "{}", sign_char(b))?;
        }
        Ok(())
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Syntax {
            pos: 0,
            msg: format!("bad letter '{s}'"),
        };
        let family = match s.get(..2).ok_or_else(bad)? {
            "V1" => Family::V1,
            "V2" => Family::V2,
            "V3" => Family::V3,
            "V4" => Family::V4,
            "C1" => Family::C1,
            "C2" => Family::C2,
            "C3" => Family::C3,
            "C4" => Family::C4,
            _ => return Err(bad()),
        };
        let signs: Vec<i8> = s[2..]
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(bad()),
            })
            .collect::<Result<_>>()?;
        match (family.has_beta(), signs.as_slice()) {
            (true, [a, b]) => Ok(Letter::new(family, *a, Some(*b))?),
            (false, [a]) => Ok(Letter::new(family, *a, None)?),
            _ => Err(bad()),
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by the text encoding.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_string().cmp(&other.to_string())
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// How the traversal meets a corner between the new divisor and the previous one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Corner {
    /// Reached along the previous divisor, left along the new one.
    ArriveOld,
    /// Reached along the new divisor, left along the previous one.
    ArriveNew,
}

/// Local context of a point on the divisor `{u = 0}` of a normalized chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointContext {
    /// `+1` when the traversal passes the point with `v` increasing.
    pub dir: i8,
    pub corner: Option<Corner>,
}

fn unclassifiable(msg: &str) -> Error {
    Error::UnclassifiableLocalModel(msg.to_string())
}

/// Order and sign of the first non-vanishing derivative of `g` at `t`.
fn leading_derivative(g: &UniPoly, t: &AlgebraicPoint) -> Option<(usize, i8)> {
    let mut d = g.clone();
    let mut j = 0;
    while !d.is_zero() {
        let s = t.sign_of(&d);
        if s != 0 {
            return Some((j, s));
        }
        d = d.derivative();
        j += 1;
    }
    None
}

/// `p(u, t + w(u))` modulo `u^(n+1)`.
fn compose_truncated(p: &Poly, w: &UniPoly, n: usize) -> UniPoly {
    let trunc = |f: UniPoly| {
        let mut c = f.coeffs().to_vec();
        c.truncate(n + 1);
        UniPoly::new(c)
    };
    let mut acc = UniPoly::zero();
    for c in p.to_y_coeffs().into_iter().rev() {
        acc = trunc(&(&acc * w) + &c);
    }
    acc
}

/// Sign, for `u > 0`, of the flow on the center manifold of a semi-hyperbolic
/// point whose zero eigenvalue is transverse to the divisor. The center manifold
/// flow has the leading term of `P(u, φ(u))` where `Q(u, φ(u)) = 0`.
fn transverse_center_sign(sys: &ConstrainedSystem, t: &Rational) -> Option<i8> {
    let shift = |f: &Poly| f.substitute(&Poly::x(), &(&Poly::y() + &Poly::constant(t.clone())));
    let (p, q) = (shift(&sys.p), shift(&sys.q));
    let d = q.coeff(0, 1);
    let mut n = 8;
    while n <= 64 {
        let mut w = UniPoly::zero();
        for _ in 0..=n {
            let r = compose_truncated(&q, &w, n);
            if r.is_zero() {
                break;
            }
            w = &w - &r.scale(&(rat(1) / &d));
        }
        let g = compose_truncated(&p, &w, n);
        if let Some(c) = g.coeffs().iter().find(|c| sign(c) != 0) {
            return Some(sign(c));
        }
        n *= 2;
    }
    None
}

/// Letter of an elementary special point at `v = t` on the divisor.
pub fn classify_point(
    sys: &ConstrainedSystem,
    t: &AlgebraicPoint,
    ctx: PointContext,
    normalize: bool,
) -> Result<Letter> {
    let line = Line::XEquals(rat(0));
    let pt = Point::OnLine(line.clone(), t.clone());
    let g = sys.q.restrict_to_line(&line);
    let interval = g.is_zero();
    let equilibrium = interval || (pt.sign_of(&sys.q) == 0 && pt.sign_of(&sys.p) == 0);
    let sigma = pt.sign_of(&sys.delta);
    let a = pt.sign_of(&sys.p.partial_dx());
    let d = pt.sign_of(&sys.q.partial_dy());
    let tau = pt.sign_of(&sys.delta.partial_dy());

    let letter = if let Some(corner) = ctx.corner {
        if sigma == 0 {
            return Err(unclassifiable("impasse curve through a corner"));
        }
        if !equilibrium || a * d >= 0 {
            return Err(unclassifiable("corner is not a hyperbolic saddle"));
        }
        let arriving = match corner {
            Corner::ArriveOld => a,
            Corner::ArriveNew => d,
        };
        Letter::new(Family::V3, sigma * arriving, None)?
    } else if !equilibrium {
        if sigma != 0 {
            return Err(unclassifiable("regular point"));
        }
        if tau == 0 {
            return Err(unclassifiable("impasse curve tangent to the divisor"));
        }
        let s = pt.sign_of(&sys.q);
        Letter::new(Family::C3, s * tau, None)?
    } else if interval {
        if a == 0 {
            return Err(unclassifiable("degenerate point on an equilibrium interval"));
        }
        if sigma != 0 {
            return Err(unclassifiable("regular point of an equilibrium interval"));
        }
        Letter::new(Family::C4, a, None)?
    } else {
        let on_impasse = sigma == 0;
        // With the center manifold transverse to the divisor the half-plane picture
        // is that of a hyperbolic point; the transverse sign comes from the center flow.
        let a = if a == 0 && d != 0 {
            let t = t
                .as_rational()
                .ok_or_else(|| unclassifiable("transverse center manifold at an irrational point"))?;
            transverse_center_sign(sys, t).ok_or_else(|| unclassifiable("flat center manifold"))?
        } else {
            a
        };
        if a == 0 {
            return Err(unclassifiable("zero eigenvalue transverse to the divisor"));
        }
        if on_impasse && tau == 0 {
            return Err(unclassifiable("impasse curve tangent to the divisor"));
        }
        // Orientation of the constrained phase portrait; the models with impasse use X itself.
        let o = if on_impasse { 1 } else { sigma };
        let (hyp, semi) = if on_impasse {
            (Family::C1, Family::C2)
        } else {
            (Family::V1, Family::V2)
        };
        if d != 0 {
            Letter::new(hyp, o * d, Some(o * a))?
        } else {
            let (j, gj) = leading_derivative(&g, t).ok_or_else(|| unclassifiable("flat divisor field"))?;
            if j % 2 == 0 {
                Letter::new(semi, o * a, Some(o * gj * ctx.dir))?
            } else {
                Letter::new(hyp, o * gj, Some(o * a))?
            }
        }
    };
    Ok(if normalize { letter.normalized() } else { letter })
}

/// Letter of an arc of equilibria sampled at the rational `v = t`.
pub fn classify_arc(sys: &ConstrainedSystem, t: &Rational) -> Result<Letter> {
    let zero = rat(0);
    let a = sign(&sys.p.partial_dx().eval(&zero, t));
    let sigma = sign(&sys.delta.eval(&zero, t));
    if a == 0 || sigma == 0 {
        return Err(unclassifiable("arc sample is a special point"));
    }
    Letter::new(Family::V4, sigma * a, None)
}
