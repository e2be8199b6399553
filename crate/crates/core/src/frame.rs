//! Floating-point simplices, used only to rule out incidences before the
//! exact tests. Every answer errs on the side of "maybe".

use num_traits::ToPrimitive;

use crate::linalg::Rational;
use crate::point::Point;

const TOL: f64 = 1e-6;

fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Padded bounding box plus, when well conditioned, the inverse edge matrix.
#[derive(Clone)]
pub(crate) struct Frame {
    lo: Vec<f64>,
    hi: Vec<f64>,
    origin: Vec<f64>,
    points: Vec<Vec<f64>>,
    inverse: Option<Vec<Vec<f64>>>,
}

fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs()))?;
        if !(m[p][c].abs() > 1e-300) {
            return None;
        }
        m.swap(c, p);
        let d = m[c][c];
        for x in m[c].iter_mut() {
            *x /= d;
        }
        for r in 0..n {
            if r != c {
                let k = m[r][c];
                if k != 0.0 {
                    for j in 0..2 * n {
                        m[r][j] -= k * m[c][j];
                    }
                }
            }
        }
    }
    let inv: Vec<Vec<f64>> = m.into_iter().map(|r| r[n..].to_vec()).collect();
    let norm = |m: &[Vec<f64>]| m.iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    (norm(a) * norm(&inv) < 1e8 && inv.iter().flatten().all(|x| x.is_finite())).then_some(inv)
}

impl Frame {
    pub(crate) fn point(x: &Point) -> Vec<f64> {
        x.0.iter().map(to_f64).collect()
    }

    pub(crate) fn new(points: &[Point]) -> Frame {
        let n = points[0].dim();
        let f: Vec<Vec<f64>> = points.iter().map(Frame::point).collect();
        let finite = f.iter().flatten().all(|x| x.is_finite());
        let pad = |v: f64| 1e-9 * (1.0 + v.abs());
        let (lo, hi) = if finite {
            (
                (0..n)
                    .map(|i| f.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min))
                    .map(|v| v - pad(v))
                    .collect(),
                (0..n)
                    .map(|i| f.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max))
                    .map(|v| v + pad(v))
                    .collect(),
            )
        } else {
            (vec![f64::NEG_INFINITY; n], vec![f64::INFINITY; n])
        };
        let inverse = if finite && points.len() == n + 1 {
            // columns are the edge vectors
            let a: Vec<Vec<f64>> = (0..n)
                .map(|i| (1..=n).map(|j| f[j][i] - f[0][i]).collect())
                .collect();
            invert(&a)
        } else {
            None
        };
        Frame {
            lo,
            hi,
            origin: f[0].clone(),
            points: f,
            inverse,
        }
    }

    fn barycentric(&self, x: &[f64]) -> Option<Vec<f64>> {
        let inv = self.inverse.as_ref()?;
        let d: Vec<f64> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        let rest: Vec<f64> = inv
            .iter()
            .map(|r| r.iter().zip(&d).map(|(a, b)| a * b).sum())
            .collect();
        let mut l = vec![1.0 - rest.iter().sum::<f64>()];
        l.extend(rest);
        l.iter().all(|v| v.is_finite()).then_some(l)
    }

    /// False only when `x` is certainly outside the simplex.
    pub(crate) fn may_contain(&self, x: &[f64]) -> bool {
        if x.iter().any(|v| !v.is_finite()) {
            return true;
        }
        if x.iter().enumerate().any(|(i, &v)| v < self.lo[i] || v > self.hi[i]) {
            return false;
        }
        self.barycentric(x).map_or(true, |l| l.iter().all(|&v| v > -TOL))
    }

    /// True only when the closed simplices are certainly disjoint.
    pub(crate) fn apart(&self, other: &Frame) -> bool {
        if (0..self.lo.len()).any(|i| self.hi[i] < other.lo[i] || other.hi[i] < self.lo[i]) {
            return true;
        }
        let outside = |a: &Frame, b: &Frame| {
            if b.points.iter().flatten().any(|v| !v.is_finite()) {
                return false;
            }
            let ls: Option<Vec<Vec<f64>>> = b.points.iter().map(|p| a.barycentric(p)).collect();
            ls.is_some_and(|ls| (0..ls[0].len()).any(|i| ls.iter().all(|l| l[i] < -TOL)))
        };
        outside(self, other) || outside(other, self)
    }
}

/// Uniform bucket grid over the bounding boxes of a set of frames.
pub(crate) struct Grid {
    lo: Vec<f64>,
    width: Vec<f64>,
    per_axis: usize,
    buckets: Vec<Vec<usize>>,
    /// Frames with unusable boxes, candidates for every query.
    everywhere: Vec<usize>,
}

impl Grid {
    pub(crate) fn new(frames: &[Frame]) -> Grid {
        let n = frames.first().map_or(1, |f| f.lo.len()).max(1);
        let finite: Vec<usize> = (0..frames.len())
            .filter(|&i| frames[i].lo.iter().chain(&frames[i].hi).all(|v| v.is_finite()))
            .collect();
        let mut lo = vec![0.0; n];
        let mut hi = vec![1.0; n];
        for (k, &i) in finite.iter().enumerate() {
            for d in 0..n {
                if k == 0 || frames[i].lo[d] < lo[d] {
                    lo[d] = frames[i].lo[d];
                }
                if k == 0 || frames[i].hi[d] > hi[d] {
                    hi[d] = frames[i].hi[d];
                }
            }
        }
        let per_axis = ((frames.len() as f64).powf(1.0 / n as f64).ceil() as usize).clamp(1, 256);
        let width: Vec<f64> = (0..n)
            .map(|d| ((hi[d] - lo[d]) / per_axis as f64).max(f64::MIN_POSITIVE))
            .collect();
        let mut g = Grid {
            lo,
            width,
            per_axis,
            buckets: vec![Vec::new(); per_axis.pow(n as u32)],
            everywhere: (0..frames.len()).filter(|i| !finite.contains(i)).collect(),
        };
        for &i in &finite {
            for b in g.range(&frames[i].lo, &frames[i].hi) {
                g.buckets[b].push(i);
            }
        }
        g
    }

    fn range(&self, lo: &[f64], hi: &[f64]) -> Vec<usize> {
        let axis = |v: f64, d: usize| -> usize {
            let t = ((v - self.lo[d]) / self.width[d]).floor();
            if t.is_nan() || t < 0.0 {
                0
            } else {
                (t as usize).min(self.per_axis - 1)
            }
        };
        let spans: Vec<(usize, usize)> = (0..self.lo.len())
            .map(|d| {
                if lo[d].is_finite() && hi[d].is_finite() {
                    (axis(lo[d], d), axis(hi[d], d))
                } else {
                    (0, self.per_axis - 1)
                }
            })
            .collect();
        let mut out = vec![0usize];
        for &(a, b) in spans.iter().rev() {
            out = out
                .iter()
                .flat_map(|&base| (a..=b).map(move |k| base * self.per_axis + k))
                .collect();
        }
        out
    }

    /// Indices of frames whose boxes may meet the box of `f`, ascending.
    pub(crate) fn candidates(&self, f: &Frame) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .range(&f.lo, &f.hi)
            .into_iter()
            .flat_map(|b| self.buckets[b].iter().copied())
            .chain(self.everywhere.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
