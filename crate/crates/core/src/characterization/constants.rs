use super::CharacterizationError;

/// Which min-sum problem a regular-graph quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Voltage,
    Flow,
}

/// `h_s = 1 / ((d−1)^s − 1)`.
pub fn h_term(d: usize, s: usize) -> f64 {
    1.0 / (((d - 1) as f64).powi(s as i32) - 1.0)
}

/// Constants of the closed-form error characterization on `d`-regular graphs,
/// evaluated from the three-term recursion in `δ_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularConstants {
    pub d: usize,
    pub t: usize,
    /// `h[s] = h_s` for `s ∈ 0..=t+2`; `h[0]` is infinite.
    pub h: Vec<f64>,
    /// `delta[s] = δ_s` for `s ∈ 0..=t−2`.
    pub delta: Vec<f64>,
    pub b_dt: f64,
    pub c_dt: f64,
    /// Upper bound `ε_d` with `c_dt ≤ 1 + ε_d`.
    pub epsilon_d: f64,
}

impl RegularConstants {
    /// Lower end `(d−2)/(d−1)` of the bound chain.
    pub fn lower_bound(&self) -> f64 {
        (self.d - 2) as f64 / (self.d - 1) as f64
    }

    /// Links of `½ ≤ (d−2)/(d−1) ≤ b ≤ c ≤ 1+ε_d < 4` and `c ≥ 1` that fail.
    pub fn bound_violations(&self) -> Vec<String> {
        let lower = self.lower_bound();
        let upper = 1.0 + self.epsilon_d;
        let mut out = Vec::new();
        let values = [self.b_dt, self.c_dt, self.epsilon_d, lower]
            .iter()
            .chain(&self.delta)
            .all(|x| x.is_finite());
        if !values {
            out.push("non-finite value".to_string());
        }
        let checks = [
            (0.5 <= lower, "1/2 <= (d-2)/(d-1)"),
            (lower <= self.b_dt, "(d-2)/(d-1) <= b"),
            (self.b_dt <= self.c_dt, "b <= c"),
            (self.c_dt <= upper, "c <= 1 + eps_d"),
            (upper < 4.0, "1 + eps_d < 4"),
            (self.c_dt >= 1.0, "c >= 1"),
        ];
        for (ok, label) in checks {
            if !ok {
                out.push(format!("{label} fails for d={}, t={}", self.d, self.t));
            }
        }
        out
    }

    pub fn bounds_hold(&self) -> bool {
        self.bound_violations().is_empty()
    }
}

/// `ε_d = ᾱ − 1` with `ᾱ = α (c₊/(d−1) (1 + 1/(d−2)) − 1/(d(d−1)²))`.
pub fn epsilon_bound(d: usize) -> f64 {
    let d = d as f64;
    let alpha = 1.0 + 1.0 / ((d - 1.0) * (d - 1.0));
    let c_plus =
        (d * (d - 1.0) * ((d - 1.0).powi(2) + 1.0) - 1.0) / (d * ((d - 1.0).powi(2) - 1.0));
    let alpha_bar =
        alpha * (c_plus / (d - 1.0) * (1.0 + 1.0 / (d - 2.0)) - 1.0 / (d * (d - 1.0).powi(2)));
    alpha_bar - 1.0
}

/// `δ_0, …, δ_last` from the recursion.
pub fn delta_sequence(d: usize, last: usize) -> Vec<f64> {
    let df = d as f64;
    let mut delta = vec![1.0 / df, 1.0 / (df - 1.0) + df - 1.0];
    for s in 2..=last {
        let growth = 2.0 + (df - 2.0).powi(2) / (df - 1.0) * (1.0 + h_term(d, s + 2));
        let next = growth * delta[s - 1] / (df - 1.0) - delta[s - 2] / ((df - 1.0) * (df - 1.0));
        delta.push(next);
    }
    delta.truncate(last + 1);
    delta
}

/// Evaluates `h_s`, `δ_s`, `b_{d,t}`, `c_{d,t}` and `ε_d`.
pub fn regular_constants(d: usize, t: usize) -> Result<RegularConstants, CharacterizationError> {
    if d < 3 || t < 3 {
        return Err(CharacterizationError::InvalidParameter(format!(
            "regular constants need d >= 3 and t >= 3, got d={d}, t={t}"
        )));
    }
    let df = d as f64;
    let h: Vec<f64> = (0..=t + 2).map(|s| h_term(d, s)).collect();
    let delta = delta_sequence(d, t - 2);
    let (last, before) = (delta[t - 2], delta[t - 3]);
    let b_dt = (1.0 + (df - 2.0) * (1.0 + h[t + 1])) * last / (df - 1.0).powi(2)
        - (df - 2.0) * (1.0 + h[t + 1]) * before / (df - 1.0).powi(3);
    let c_dt =
        (1.0 + 1.0 / ((df - 2.0) * (1.0 + h[t]))) * last / (df - 1.0) - before / (df - 1.0).powi(2);
    Ok(RegularConstants {
        d,
        t,
        h,
        delta,
        b_dt,
        c_dt,
        epsilon_d: epsilon_bound(d),
    })
}

/// Birth–death chain obtained by collapsing each level of the computation tree
/// of an equal-weight `d`-regular graph into a single state.
///
/// States `0..=t+1`: state 0 is the root side, state `t+1` the absorbing
/// boundary. From state `s` the chain steps to `s+1` with probability `p_s`
/// and to `s−1` with probability `q_s`; the remaining mass from state 0 is
/// killed.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedNetwork {
    pub d: usize,
    pub t: usize,
    pub weight: f64,
    pub problem: Problem,
    /// Effective conductances `C_0, …, C_t`.
    pub conductances: Vec<f64>,
    pub forward: Vec<f64>,
    pub backward: Vec<f64>,
    /// Probability `f_s` of reaching state 0 before absorption, `s ∈ 0..=t+1`.
    pub hitting: Vec<f64>,
}

impl ReducedNetwork {
    pub fn new(
        d: usize,
        t: usize,
        weight: f64,
        problem: Problem,
    ) -> Result<Self, CharacterizationError> {
        if d < 3 || t < 2 || !(weight > 0.0) {
            return Err(CharacterizationError::InvalidParameter(format!(
                "reduced network needs d >= 3, t >= 2, positive weight; got d={d}, t={t}, weight={weight}"
            )));
        }
        let df = d as f64;
        let mut conductances = vec![weight * (df - 1.0)];
        for s in 1..t {
            conductances.push(weight * (df - 2.0).powi(2) / (df - 1.0) * (1.0 + h_term(d, s + 1)));
        }
        let boundary = match problem {
            Problem::Flow => h_term(d, t),
            Problem::Voltage => h_term(d, t + 1),
        };
        conductances.push(weight * (df - 2.0) * (1.0 + boundary));

        let mut forward = vec![0.0; t + 1];
        let mut backward = vec![0.0; t + 1];
        forward[0] = weight / (weight + conductances[0]);
        backward[0] = 1.0 - forward[0];
        for s in 1..t {
            forward[s] = weight / (2.0 * weight + conductances[s]);
            backward[s] = forward[s];
        }
        forward[t] = conductances[t] / (weight + conductances[t]);
        backward[t] = 1.0 - forward[t];

        // f_0 = 1, f_{t+1} = 0, f_s = q_s f_{s−1} + p_s f_{s+1}; Thomas algorithm.
        let mut upper = vec![0.0; t + 1];
        let mut rhs = vec![0.0; t + 1];
        for s in 1..=t {
            let lower = -backward[s];
            let mut known = 0.0;
            if s == 1 {
                known += backward[1];
            }
            let pivot = 1.0 - if s > 1 { lower * upper[s - 1] } else { 0.0 };
            upper[s] = -forward[s] / pivot;
            rhs[s] = (known - if s > 1 { lower * rhs[s - 1] } else { 0.0 }) / pivot;
        }
        let mut hitting = vec![0.0; t + 2];
        hitting[0] = 1.0;
        for s in (1..=t).rev() {
            hitting[s] = rhs[s] - upper[s] * hitting[s + 1];
        }
        Ok(ReducedNetwork {
            d,
            t,
            weight,
            problem,
            conductances,
            forward,
            backward,
            hitting,
        })
    }

    /// `f_s / ((1 − f_1 p_0) ω d)`.
    ///
    /// For `𝕧` one level above the leaves, `s = t − 1` gives `L̄⁻¹_{ṽ𝕧}` and
    /// `s = t` gives `L̄⁻¹_{w̃𝕧}` (flows) or `L̄⁻¹_{root,𝕧}` (voltages).
    pub fn green(&self, s: usize) -> f64 {
        self.hitting[s] / ((1.0 - self.hitting[1] * self.forward[0]) * self.weight * self.d as f64)
    }

    /// Flow trees: `L̄⁻¹_{ṽ𝕧} − L̄⁻¹_{w̃𝕧}` for `𝕧` one level above the leaves on the `ṽ` side.
    pub fn flow_green_difference(&self) -> f64 {
        self.green(self.t - 1) - self.green(self.t)
    }

    /// `α_1..=α_{t+1}` and `β_0..=β_t` of the closed-form chain solution (index 0 of `alpha` unused).
    pub fn alpha_beta(&self) -> (Vec<f64>, Vec<f64>) {
        let (p, q) = (&self.forward, &self.backward);
        let t = self.t;
        let mut alpha = vec![f64::NAN, 1.0, 1.0];
        for s in 3..=t + 1 {
            alpha.push(alpha[s - 1] - p[s - 2] * q[s - 1] * alpha[s - 2]);
        }
        let mut beta = vec![0.0, 1.0, 1.0];
        for s in 3..=t {
            beta.push(beta[s - 1] - p[s - 1] * q[s] * beta[s - 2]);
        }
        beta.truncate(t + 1);
        (alpha, beta)
    }

    /// `ξ_{t−1} = (α_{t+1} − p_0 q_1 β_t) / (q_1⋯q_{t−1} p_t) / (d−1)^{t−1}`.
    pub fn xi_last(&self) -> f64 {
        let (alpha, beta) = self.alpha_beta();
        let t = self.t;
        let product: f64 = self.backward[1..t].iter().product();
        (alpha[t + 1] - self.forward[0] * self.backward[1] * beta[t])
            / (product * self.forward[t])
            / ((self.d - 1) as f64).powi(t as i32 - 1)
    }

    /// `ξ_0, …, ξ_{t−1}` from the two-term recursion in the chain probabilities.
    pub fn xi_recursion(&self) -> Vec<f64> {
        let (p, q) = (&self.forward, &self.backward);
        let dm = (self.d - 1) as f64;
        let mut xi = vec![
            p[0] * q[1] / p[1],
            (1.0 - p[0] * q[1] - p[1] * q[2]) / (q[1] * p[2] * dm),
        ];
        for s in 2..self.t {
            let next = p[s] / (q[s] * p[s + 1] * dm) * xi[s - 1]
                - p[s - 1] * p[s] * q[s + 1] / (q[s - 1] * q[s] * p[s + 1] * dm * dm) * xi[s - 2];
            xi.push(next);
        }
        xi.truncate(self.t);
        xi
    }

    /// The characterization constant implied by the chain: `c` for flows, `b` for voltages.
    ///
    /// Flows: `c = 1 / (ω d (d−1)^{t−1} (L̄⁻¹_{ṽ𝕧} − L̄⁻¹_{w̃𝕧}))`.
    /// Voltages: `b = 1 / (ω d (d−1)^t L̄⁻¹_{root,𝕧})` for `𝕧` one level above the leaves.
    pub fn constant(&self) -> f64 {
        let dm = (self.d - 1) as f64;
        let scale = self.weight * self.d as f64;
        match self.problem {
            Problem::Flow => {
                1.0 / (scale * dm.powi(self.t as i32 - 1) * self.flow_green_difference())
            }
            Problem::Voltage => 1.0 / (scale * dm.powi(self.t as i32) * self.green(self.t)),
        }
    }
}

/// Constants `(b, c)` implied by grounded-inverse entries of the computation tree.
pub fn network_constants(d: usize, t: usize) -> Result<(f64, f64), CharacterizationError> {
    let b = ReducedNetwork::new(d, t, 1.0, Problem::Voltage)?.constant();
    let c = ReducedNetwork::new(d, t, 1.0, Problem::Flow)?.constant();
    Ok((b, c))
}
