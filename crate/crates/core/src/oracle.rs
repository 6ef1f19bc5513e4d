//! Plain subset enumeration, kept independent of the search engine so the two
//! can be compared.

use crate::certify::Target;
use crate::error::{Error, Result};
use crate::group::GroupSpec;

pub const ORACLE_MAX_ORDER: u64 = 32;
pub const ORACLE_MAX_SIZE: usize = 7;

/// Minimum size of a difference basis for `target`, found by trying every
/// subset that contains the identity in order of increasing size.
pub fn brute_force_delta(g: &GroupSpec, target: &Target) -> Result<u64> {
    let n = g.order() as usize;
    if g.order() > ORACLE_MAX_ORDER {
        return Err(Error::OracleRegime(format!("order {n} exceeds {ORACLE_MAX_ORDER}")));
    }
    let elems: Vec<_> = g.elements().collect();
    let mut diff = vec![0u32; n * n];
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            diff[i * n + j] = g.key(&g.diff(a, b)) as u32;
        }
    }
    let want: u64 = target
        .resolve(g)?
        .iter()
        .fold(0, |m, x| m | 1u64 << g.key(x));
    if want == 0 {
        return Ok(0);
    }
    for size in 1..=ORACLE_MAX_SIZE {
        let mut pick: Vec<usize> = (1..size).collect();
        if size - 1 > n - 1 {
            break;
        }
        loop {
            let mut set = vec![0usize];
            set.extend(&pick);
            let mut covered = 0u64;
            for &a in &set {
                for &b in &set {
                    covered |= 1u64 << diff[a * n + b];
                }
            }
            if covered & want == want {
                return Ok(size as u64);
            }
            if !next_combination(&mut pick, n) {
                break;
            }
        }
    }
    Err(Error::OracleRegime(format!(
        "no difference basis of size at most {ORACLE_MAX_SIZE}"
    )))
}

/// Advances a strictly increasing selection from `1..n`.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < n - (k - i) {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{parse_group_spec, GroupElement};

    #[test]
    fn oracle_examples() {
        assert_eq!(brute_force_delta(&GroupSpec::cyclic(5), &Target::Full).unwrap(), 3);
        let v4 = parse_group_spec("C2^2").unwrap();
        assert_eq!(brute_force_delta(&v4, &Target::Full).unwrap(), 3);
        assert_eq!(brute_force_delta(&GroupSpec::cyclic(13), &Target::Full).unwrap(), 4);
        assert_eq!(brute_force_delta(&GroupSpec::cyclic(1), &Target::Full).unwrap(), 1);
    }

    #[test]
    fn oracle_subset_target() {
        let t = Target::Elements(vec![GroupElement::new(vec![3])]);
        assert_eq!(brute_force_delta(&GroupSpec::cyclic(8), &t).unwrap(), 2);
        assert_eq!(
            brute_force_delta(&GroupSpec::cyclic(8), &Target::Elements(vec![])).unwrap(),
            0
        );
    }

    #[test]
    fn oracle_regime() {
        assert!(matches!(
            brute_force_delta(&GroupSpec::cyclic(33), &Target::Full),
            Err(Error::OracleRegime(_))
        ));
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut pick = vec![1, 2];
        let mut count = 1;
        while next_combination(&mut pick, 6) {
            count += 1;
        }
        assert_eq!(count, 10);
    }
}
