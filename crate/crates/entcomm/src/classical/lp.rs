//! Dense two-phase simplex for the small linear programs of this crate
//! (capped-encoding optimization and extreme-point checks). Problems have a
//! few dozen variables; robustness matters more than speed, so the pivot
//! rule falls back to Bland's rule to rule out cycling.

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub n_vars: usize,
    /// maximize c . x
    pub objective: Vec<f64>,
    /// rows a . x = b, b >= 0
    pub eq: Vec<(Vec<f64>, f64)>,
    /// rows a . x <= b, b >= 0
    pub ub: Vec<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum LpError {
    #[error("infeasible")]
    Infeasible,
    #[error("unbounded")]
    Unbounded,
    #[error("iteration limit")]
    IterationLimit,
}

const EPS: f64 = 1e-9;

/// x >= 0 is implicit.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    for (_, b) in lp.eq.iter().chain(lp.ub.iter()) {
        assert!(*b >= -1e-12, "rhs must be nonnegative");
    }
    let m = lp.eq.len() + lp.ub.len();
    let n_slack = lp.ub.len();
    let n_art = m; // one artificial per row keeps phase 1 simple
    let n_total = lp.n_vars + n_slack + n_art;

    // tableau: m rows of [A | slack | artificial | b]
    let width = n_total + 1;
    let mut t = vec![0.0f64; m * width];
    let mut basis = vec![0usize; m];
    for (r, (a, b)) in lp.eq.iter().chain(lp.ub.iter()).enumerate() {
        for (j, &v) in a.iter().enumerate() {
            t[r * width + j] = v;
        }
        t[r * width + n_total] = *b;
    }
    for (k, r) in (lp.eq.len()..m).enumerate() {
        t[r * width + lp.n_vars + k] = 1.0;
    }
    for r in 0..m {
        let art = lp.n_vars + n_slack + r;
        t[r * width + art] = 1.0;
        basis[r] = art;
    }

    // phase 1: maximize -(sum of artificials); z-row = -c with basic
    // artificial columns zeroed out
    let mut obj1 = vec![0.0f64; width];
    for r in 0..m {
        obj1[lp.n_vars + n_slack + r] += 1.0;
    }
    for r in 0..m {
        for j in 0..width {
            obj1[j] -= t[r * width + j];
        }
    }
    run_simplex(&mut t, &mut basis, &mut obj1, m, width, lp.n_vars + n_slack + n_art)?;
    if obj1[n_total] < -1e-7 {
        return Err(LpError::Infeasible);
    }
    // drive any lingering artificial out of the basis
    for r in 0..m {
        if basis[r] >= lp.n_vars + n_slack {
            let mut pivoted = false;
            for j in 0..lp.n_vars + n_slack {
                if t[r * width + j].abs() > 1e-8 {
                    pivot(&mut t, &mut basis, &mut obj1, m, width, r, j);
                    pivoted = true;
                    break;
                }
            }
            if !pivoted {
                // redundant row
                for j in 0..width {
                    t[r * width + j] = 0.0;
                }
            }
        }
    }

    // phase 2: maximize c . x  ->  reduced-cost row for -c
    let mut obj2 = vec![0.0f64; width];
    for j in 0..lp.n_vars {
        obj2[j] = -lp.objective[j];
    }
    for r in 0..m {
        let coeff = obj2[basis[r]];
        if coeff != 0.0 {
            for j in 0..width {
                obj2[j] -= coeff * t[r * width + j];
            }
        }
    }
    run_simplex(&mut t, &mut basis, &mut obj2, m, width, lp.n_vars + n_slack)?;

    let mut x = vec![0.0f64; lp.n_vars];
    for r in 0..m {
        if basis[r] < lp.n_vars {
            x[basis[r]] = t[r * width + n_total];
        }
    }
    let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution { value, x })
}

fn run_simplex(
    t: &mut [f64],
    basis: &mut [usize],
    obj: &mut [f64],
    m: usize,
    width: usize,
    n_cols: usize,
) -> Result<(), LpError> {
    let mut iters = 0usize;
    let mut degenerate_streak = 0usize;
    loop {
        iters += 1;
        if iters > 20_000 {
            return Err(LpError::IterationLimit);
        }
        // entering column: most negative reduced cost (Dantzig), Bland when
        // degeneracy drags on
        let use_bland = degenerate_streak > 40;
        let mut enter: Option<usize> = None;
        let mut best = -EPS;
        for j in 0..n_cols {
            if obj[j] < best {
                if use_bland {
                    enter = Some(j);
                    break;
                }
                best = obj[j];
                enter = Some(j);
            } else if use_bland && obj[j] < -EPS && enter.is_none() {
                enter = Some(j);
                break;
            }
        }
        let Some(col) = enter else { return Ok(()) };
        // ratio test
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for r in 0..m {
            let a = t[r * width + col];
            if a > EPS {
                let ratio = t[r * width + width - 1] / a;
                if ratio < best_ratio - 1e-12
                    || (ratio < best_ratio + 1e-12
                        && leave.is_some_and(|lr| basis[r] < basis[lr]))
                {
                    best_ratio = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(row) = leave else { return Err(LpError::Unbounded) };
        if best_ratio < 1e-12 {
            degenerate_streak += 1;
        } else {
            degenerate_streak = 0;
        }
        pivot(t, basis, obj, m, width, row, col);
    }
}

fn pivot(
    t: &mut [f64],
    basis: &mut [usize],
    obj: &mut [f64],
    m: usize,
    width: usize,
    row: usize,
    col: usize,
) {
    let p = t[row * width + col];
    for j in 0..width {
        t[row * width + j] /= p;
    }
    for r in 0..m {
        if r != row {
            let f = t[r * width + col];
            if f != 0.0 {
                for j in 0..width {
                    t[r * width + j] -= f * t[row * width + j];
                }
            }
        }
    }
    let f = obj[col];
    if f != 0.0 {
        for j in 0..width {
            obj[j] -= f * t[row * width + j];
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_simple_bounded_lp() {
        // max x + y st x + 2y <= 4, 3x + y <= 6
        let lp = LinearProgram {
            n_vars: 2,
            objective: vec![1.0, 1.0],
            eq: vec![],
            ub: vec![(vec![1.0, 2.0], 4.0), (vec![3.0, 1.0], 6.0)],
        };
        let s = solve(&lp).unwrap();
        assert!((s.value - 2.8).abs() < 1e-9, "{}", s.value);
    }

    #[test]
    fn handles_equalities() {
        // max x st x + y = 1, x <= 0.7
        let lp = LinearProgram {
            n_vars: 2,
            objective: vec![1.0, 0.0],
            eq: vec![(vec![1.0, 1.0], 1.0)],
            ub: vec![(vec![1.0, 0.0], 0.7)],
        };
        let s = solve(&lp).unwrap();
        assert!((s.value - 0.7).abs() < 1e-9);
        assert!((s.x[1] - 0.3).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible() {
        let lp = LinearProgram {
            n_vars: 1,
            objective: vec![1.0],
            eq: vec![(vec![1.0], 2.0)],
            ub: vec![(vec![1.0], 1.0)],
        };
        assert_eq!(solve(&lp).unwrap_err(), LpError::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let lp = LinearProgram {
            n_vars: 2,
            objective: vec![1.0, 0.0],
            eq: vec![],
            ub: vec![(vec![-1.0, 1.0], 1.0)],
        };
        assert_eq!(solve(&lp).unwrap_err(), LpError::Unbounded);
    }

    #[test]
    fn simplex_matches_enumeration_on_random_lps() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            // max c.x over the simplex sum x = 1 plus random caps
            let n = rng.gen_range(2..5usize);
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let cap: f64 = rng.gen_range(1.0 / n as f64..1.0);
            let lp = LinearProgram {
                n_vars: n,
                objective: c.clone(),
                eq: vec![(vec![1.0; n], 1.0)],
                ub: (0..n)
                    .map(|j| {
                        let mut row = vec![0.0; n];
                        row[j] = 1.0;
                        (row, cap)
                    })
                    .collect(),
            };
            let s = solve(&lp).unwrap();
            // oracle: sort coefficients descending, fill caps greedily
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| c[b].partial_cmp(&c[a]).unwrap());
            let mut left = 1.0f64;
            let mut best = 0.0;
            for &j in &idx {
                let take = left.min(cap);
                best += c[j] * take;
                left -= take;
                if left <= 1e-12 {
                    break;
                }
            }
            assert!((s.value - best).abs() < 1e-8, "{} vs {}", s.value, best);
        }
    }
}
