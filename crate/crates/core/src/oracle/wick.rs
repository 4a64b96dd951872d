//! Exact vacuum expectations of products of `A_μ = a_μ − a_μ†`.
//!
//! Two independent evaluations: pairing via Wick's theorem, and direct
//! expansion into `2ⁿ` ladder-operator monomials acting on Fock states. All
//! arithmetic is in integers, so the two agree exactly.

/// Vacuum contraction `⟨A_μ A_ν⟩ = −δ_μν`.
fn contraction(mu: usize, nu: usize) -> i64 {
    -i64::from(mu == nu)
}

/// `⟨0| A_{m₀} A_{m₁} ⋯ |0⟩` as a sum over perfect matchings.
pub fn vacuum_expectation_wick(modes: &[usize]) -> i64 {
    if modes.is_empty() {
        return 1;
    }
    if modes.len() % 2 == 1 {
        return 0;
    }
    let first = modes[0];
    let rest = &modes[1..];
    let mut total = 0;
    for (j, &m) in rest.iter().enumerate() {
        let c = contraction(first, m);
        if c == 0 {
            continue;
        }
        let remaining: Vec<usize> = rest
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, &x)| x)
            .collect();
        total += c * vacuum_expectation_wick(&remaining);
    }
    total
}

/// The same expectation by expanding each `A` into `a` and `−a†` and
/// applying the monomials to the vacuum. The amplitude of a monomial is
/// `±√N`; only monomials returning to the vacuum contribute, and for
/// those `N` is a perfect square.
pub fn vacuum_expectation_fock(modes: &[usize]) -> i64 {
    let n = modes.len();
    assert!(n < 63, "too many operators");
    let n_modes = modes.iter().max().map_or(0, |m| m + 1);
    let mut total = 0i64;
    for mask in 0u64..(1u64 << n) {
        let mut occ = vec![0u64; n_modes];
        let mut radicand: u64 = 1;
        let mut sign = 1i64;
        let mut alive = true;
        // rightmost operator acts first
        for (pos, &m) in modes.iter().enumerate().rev() {
            let creation = mask >> pos & 1 == 1;
            if creation {
                occ[m] += 1;
                radicand *= occ[m];
                sign = -sign;
            } else {
                if occ[m] == 0 {
                    alive = false;
                    break;
                }
                radicand *= occ[m];
                occ[m] -= 1;
            }
        }
        if alive && occ.iter().all(|&o| o == 0) {
            let root = radicand.isqrt();
            assert_eq!(root * root, radicand, "vacuum amplitude must be an integer");
            total += sign * root as i64;
        }
    }
    total
}

/// Connected second moment `⟨Q²⟩ − ⟨Q⟩²` of `Q = Σ M_μν A_μ A_ν`, by Fock
/// expansion.
pub fn quadratic_form_variance(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut second = 0;
    let mut first = 0;
    for mu in 0..n {
        for nu in 0..n {
            first += m[mu][nu] * vacuum_expectation_fock(&[mu, nu]);
            for rho in 0..n {
                for sigma in 0..n {
                    second +=
                        m[mu][nu] * m[rho][sigma] * vacuum_expectation_fock(&[mu, nu, rho, sigma]);
                }
            }
        }
    }
    second - first * first
}
