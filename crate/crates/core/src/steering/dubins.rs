//! Shortest planar Dubins paths over the six candidate words.
//!
//! Parameters are solved in the frame normalized by the turning radius,
//! following Shkel and Lumelsky's classification.

use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DubinsWord {
    Lsl,
    Rsr,
    Lsr,
    Rsl,
    Rlr,
    Lrl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Segment {
    Left,
    Straight,
    Right,
}

impl DubinsWord {
    pub const ALL: [DubinsWord; 6] =
        [DubinsWord::Lsl, DubinsWord::Rsr, DubinsWord::Lsr, DubinsWord::Rsl, DubinsWord::Rlr, DubinsWord::Lrl];

    fn segments(self) -> [Segment; 3] {
        use Segment::*;
        match self {
            DubinsWord::Lsl => [Left, Straight, Left],
            DubinsWord::Rsr => [Right, Straight, Right],
            DubinsWord::Lsr => [Left, Straight, Right],
            DubinsWord::Rsl => [Right, Straight, Left],
            DubinsWord::Rlr => [Right, Left, Right],
            DubinsWord::Lrl => [Left, Right, Left],
        }
    }
}

fn mod2pi(x: f64) -> f64 {
    x.rem_euclid(TAU)
}

/// Pose quantities shared by every word, in the radius-normalized frame.
struct Frame {
    alpha: f64,
    beta: f64,
    d: f64,
    sa: f64,
    sb: f64,
    ca: f64,
    cb: f64,
    c_ab: f64,
}

impl Frame {
    fn new(q0: [f64; 3], q1: [f64; 3], rho: f64) -> Self {
        let (dx, dy) = (q1[0] - q0[0], q1[1] - q0[1]);
        let d = dx.hypot(dy) / rho;
        let theta = if d > 0.0 { mod2pi(dy.atan2(dx)) } else { 0.0 };
        let alpha = mod2pi(q0[2] - theta);
        let beta = mod2pi(q1[2] - theta);
        Self {
            alpha,
            beta,
            d,
            sa: alpha.sin(),
            sb: beta.sin(),
            ca: alpha.cos(),
            cb: beta.cos(),
            c_ab: (alpha - beta).cos(),
        }
    }

    /// Normalized segment lengths `(t, p, q)` for one word, if it exists.
    fn word(&self, w: DubinsWord) -> Option<[f64; 3]> {
        let Frame { alpha, beta, d, sa, sb, ca, cb, c_ab } = *self;
        match w {
            DubinsWord::Lsl => {
                let tmp0 = d + sa - sb;
                let p2 = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sa - sb);
                if p2 < 0.0 {
                    return None;
                }
                let tmp1 = (cb - ca).atan2(tmp0);
                Some([mod2pi(tmp1 - alpha), p2.sqrt(), mod2pi(beta - tmp1)])
            }
            DubinsWord::Rsr => {
                let tmp0 = d - sa + sb;
                let p2 = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sb - sa);
                if p2 < 0.0 {
                    return None;
                }
                let tmp1 = (ca - cb).atan2(tmp0);
                Some([mod2pi(alpha - tmp1), p2.sqrt(), mod2pi(tmp1 - beta)])
            }
            DubinsWord::Lsr => {
                let p2 = -2.0 + d * d + 2.0 * c_ab + 2.0 * d * (sa + sb);
                if p2 < 0.0 {
                    return None;
                }
                let p = p2.sqrt();
                let tmp0 = (-ca - cb).atan2(d + sa + sb) - (-2.0f64).atan2(p);
                Some([mod2pi(tmp0 - alpha), p, mod2pi(tmp0 - beta)])
            }
            DubinsWord::Rsl => {
                let p2 = d * d - 2.0 + 2.0 * c_ab - 2.0 * d * (sa + sb);
                if p2 < 0.0 {
                    return None;
                }
                let p = p2.sqrt();
                let tmp0 = (ca + cb).atan2(d - sa - sb) - 2.0f64.atan2(p);
                Some([mod2pi(alpha - tmp0), p, mod2pi(beta - tmp0)])
            }
            DubinsWord::Rlr => {
                let tmp0 = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sa - sb)) / 8.0;
                if tmp0.abs() > 1.0 {
                    return None;
                }
                let phi = (ca - cb).atan2(d - sa + sb);
                let p = mod2pi(TAU - tmp0.acos());
                let t = mod2pi(alpha - phi + mod2pi(p / 2.0));
                Some([t, p, mod2pi(alpha - beta - t + mod2pi(p))])
            }
            DubinsWord::Lrl => {
                let tmp0 = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sb - sa)) / 8.0;
                if tmp0.abs() > 1.0 {
                    return None;
                }
                let phi = (ca - cb).atan2(d + sa - sb);
                let p = mod2pi(TAU - tmp0.acos());
                let t = mod2pi(-alpha - phi + p / 2.0);
                Some([t, p, mod2pi(beta - alpha - t + mod2pi(p))])
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DubinsPath {
    start: [f64; 3],
    rho: f64,
    word: DubinsWord,
    /// Segment lengths normalized by `rho`.
    params: [f64; 3],
}

impl DubinsPath {
    /// Shortest path from pose `q0` to pose `q1` (x, y, heading) with turning radius `rho`.
    pub fn shortest(q0: [f64; 3], q1: [f64; 3], rho: f64) -> Self {
        let frame = Frame::new(q0, q1, rho);
        let mut best: Option<(DubinsWord, [f64; 3], f64)> = None;
        for w in DubinsWord::ALL {
            if let Some(params) = frame.word(w) {
                let len: f64 = params.iter().sum();
                if best.is_none_or(|(_, _, b)| len < b) {
                    best = Some((w, params, len));
                }
            }
        }
        // LSL and RSR exist for every pose pair.
        let (word, params, _) = best.expect("a dubins word always exists");
        Self { start: q0, rho, word, params }
    }

    pub fn word(&self) -> DubinsWord {
        self.word
    }

    pub fn length(&self) -> f64 {
        self.params.iter().sum::<f64>() * self.rho
    }

    /// Pose after travelling arc length `s` along the path (clamped to the ends).
    pub fn sample(&self, s: f64) -> [f64; 3] {
        let mut t = (s / self.rho).clamp(0.0, self.params.iter().sum());
        let mut q = [0.0, 0.0, self.start[2]];
        for (seg, &len) in self.word.segments().iter().zip(&self.params) {
            let step = t.min(len);
            q = advance(q, *seg, step);
            t -= step;
            if t <= 0.0 {
                break;
            }
        }
        [q[0] * self.rho + self.start[0], q[1] * self.rho + self.start[1], q[2]]
    }
}

fn advance(q: [f64; 3], seg: Segment, t: f64) -> [f64; 3] {
    let [x, y, h] = q;
    match seg {
        Segment::Left => [x + (h + t).sin() - h.sin(), y - (h + t).cos() + h.cos(), h + t],
        Segment::Right => [x - (h - t).sin() + h.sin(), y + (h - t).cos() - h.cos(), h - t],
        Segment::Straight => [x + t * h.cos(), y + t * h.sin(), h],
    }
}
