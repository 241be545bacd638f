use crate::error::{Error, Result};
use crate::hilbert::{Frame, HVector};

/// Closed bounded convex subset: a ball or the convex hull of finitely many
/// points.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub enum ConvexBody {
    Ball { center: HVector, radius: f64 },
    Hull { points: Vec<HVector> },
}

impl ConvexBody {
    pub fn ball(center: HVector, radius: f64) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::InvalidParameter {
                name: "radius",
                reason: format!("must be a positive finite real, got {radius}"),
            });
        }
        Ok(ConvexBody::Ball { center, radius })
    }

    pub fn hull(points: Vec<HVector>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter {
                name: "points",
                reason: "hull needs at least one point".into(),
            });
        }
        Ok(ConvexBody::Hull { points })
    }

    /// Support functional `max_{k in K} <k, u>`.
    pub fn support(&self, u: &HVector) -> f64 {
        match self {
            ConvexBody::Ball { center, radius } => center.inner(u) + radius * u.norm(),
            ConvexBody::Hull { points } => points
                .iter()
                .map(|p| p.inner(u))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Distance from `p` to the body (zero inside).
    pub fn distance(&self, p: &HVector) -> f64 {
        closest_point(self, p).sub(p).norm()
    }

    pub fn contains(&self, p: &HVector, tolerance: f64) -> bool {
        self.distance(p) <= tolerance
    }

    /// Orthogonal projection of the body onto the span of `frame`.
    ///
    /// Both rules are exact: the image of a ball under an orthogonal
    /// projection is the ball of equal radius around the projected center
    /// (within the subspace), and the image of a hull is the hull of the
    /// projected vertices.
    pub fn project(&self, frame: &Frame) -> ConvexBody {
        match self {
            ConvexBody::Ball { center, radius } => ConvexBody::Ball {
                center: frame.project(center),
                radius: *radius,
            },
            ConvexBody::Hull { points } => ConvexBody::Hull {
                points: points.iter().map(|p| frame.project(p)).collect(),
            },
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        match self {
            ConvexBody::Ball { center, .. } => center.max_index(),
            ConvexBody::Hull { points } => points.iter().filter_map(HVector::max_index).max(),
        }
    }
}

/// The unique point of `body` closest to `p`.
///
/// Balls are handled by radial projection. Hulls are solved as a convex
/// quadratic minimization over simplex weights with the Wolfe min-norm-point
/// active-set method, accurate to [`crate::tol::CONVEX_QP`].
pub fn closest_point(body: &ConvexBody, p: &HVector) -> HVector {
    match body {
        ConvexBody::Ball { center, radius } => {
            let d = p.sub(center);
            let n = d.norm();
            if n <= *radius {
                p.clone()
            } else {
                center.add(&d.scale(radius / n))
            }
        }
        ConvexBody::Hull { points } => {
            // Shift by p: the closest point of the hull to p is p plus the
            // min-norm point of the shifted hull.
            let shifted: Vec<HVector> = points.iter().map(|q| q.sub(p)).collect();
            let weights = min_norm_point_weights(&shifted);
            let mut out = HVector::zero();
            for (q, w) in points.iter().zip(&weights) {
                out = out.add_scaled(q, *w);
            }
            out
        }
    }
}

/// Wolfe's min-norm-point algorithm over the convex hull of `q`.
/// Returns simplex weights of the minimizer.
fn min_norm_point_weights(q: &[HVector]) -> Vec<f64> {
    let m = q.len();
    if m == 1 {
        return vec![1.0];
    }
    let gram: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| q[i].inner(&q[j])).collect())
        .collect();
    let scale = gram
        .iter()
        .enumerate()
        .map(|(i, row)| row[i])
        .fold(1.0f64, f64::max);

    // start from the shortest vertex
    let start = (0..m)
        .min_by(|&a, &b| gram[a][a].partial_cmp(&gram[b][b]).unwrap())
        .unwrap();
    let mut corral: Vec<usize> = vec![start];
    let mut weights: Vec<f64> = vec![1.0];

    let gap_tol = 1e-13 * scale.max(1.0);
    let weight_tol = 1e-12;
    let max_iter = 16 * m + 64;

    for _ in 0..max_iter {
        // x in Gram coordinates: <x, q_j> = sum_i w_i G[i][j]
        let xq: Vec<f64> = (0..m)
            .map(|j| {
                corral
                    .iter()
                    .zip(&weights)
                    .map(|(&i, &w)| w * gram[i][j])
                    .sum()
            })
            .collect();
        let xx: f64 = corral.iter().zip(&weights).map(|(&i, &w)| w * xq[i]).sum();
        let (best, best_val) = xq
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(j, v)| (j, *v))
            .unwrap();
        if xx - best_val <= gap_tol || corral.contains(&best) {
            break;
        }
        corral.push(best);
        weights.push(0.0);

        // minor cycle: pull the affine minimizer back into the simplex
        loop {
            let affine = affine_min_norm(&gram, &corral);
            if affine.iter().all(|&b| b > weight_tol) {
                weights = affine;
                break;
            }
            let mut theta = f64::INFINITY;
            for (k, (&a, &b)) in weights.iter().zip(&affine).enumerate() {
                let _ = k;
                if b <= weight_tol && a > b {
                    theta = theta.min(a / (a - b));
                }
            }
            let theta = theta.clamp(0.0, 1.0);
            for (a, &b) in weights.iter_mut().zip(&affine) {
                *a = (1.0 - theta) * *a + theta * b;
            }
            let mut kept_corral = Vec::with_capacity(corral.len());
            let mut kept_weights = Vec::with_capacity(weights.len());
            for (&i, &w) in corral.iter().zip(&weights) {
                if w > weight_tol {
                    kept_corral.push(i);
                    kept_weights.push(w);
                }
            }
            if kept_corral.is_empty() {
                // numerical corner: keep the heaviest vertex
                let (k, _) = weights
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .unwrap();
                kept_corral.push(corral[k]);
                kept_weights.push(1.0);
            }
            corral = kept_corral;
            weights = kept_weights;
            let total: f64 = weights.iter().sum();
            for w in &mut weights {
                *w /= total;
            }
        }
    }

    let mut out = vec![0.0; m];
    for (&i, &w) in corral.iter().zip(&weights) {
        out[i] = w;
    }
    out
}

/// Minimum-norm point of the affine hull of the corral, in barycentric
/// coordinates: solves `G b = lambda 1` with `1' b = 1` via the bordered
/// system. A tiny ridge keeps degenerate corrals solvable.
fn affine_min_norm(gram: &[Vec<f64>], corral: &[usize]) -> Vec<f64> {
    let k = corral.len();
    let n = k + 1;
    let ridge = 1e-12;
    let mut a = vec![vec![0.0; n + 1]; n];
    for (r, &i) in corral.iter().enumerate() {
        for (c, &j) in corral.iter().enumerate() {
            a[r][c] = gram[i][j] + if r == c { ridge } else { 0.0 };
        }
        a[r][k] = 1.0; // -lambda column
        a[r][n] = 0.0;
    }
    for cell in a[k].iter_mut().take(k) {
        *cell = 1.0;
    }
    a[k][n] = 1.0;

    // Gaussian elimination with partial pivoting.
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r1, &r2| a[r1][col].abs().partial_cmp(&a[r2][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        let p = a[col][col];
        if p.abs() < 1e-300 {
            continue;
        }
        for row in (col + 1)..n {
            let f = a[row][col] / p;
            if f != 0.0 {
                let (top, rest) = a.split_at_mut(row);
                let pivot_row = &top[col];
                for (c2, cell) in rest[0].iter_mut().enumerate().take(n + 1).skip(col) {
                    *cell -= f * pivot_row[c2];
                }
            }
        }
    }
    let mut sol = vec![0.0; n];
    for row in (0..n).rev() {
        let mut v = a[row][n];
        for c2 in (row + 1)..n {
            v -= a[row][c2] * sol[c2];
        }
        sol[row] = if a[row][row].abs() < 1e-300 {
            0.0
        } else {
            v / a[row][row]
        };
    }
    sol.truncate(k);
    sol
}
