//! Size limits for the exponential methods.

use crate::error::{Error, Result};

/// Per-method caps on the problem size.
///
/// Every expensive entry point takes a `&Guards`; [`Guards::unlimited`]
/// switches all checks off for explicit long runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guards {
    pub whitney: usize,
    pub finite_field: usize,
    /// Full-depth NBC enumeration.
    pub nbc_full: usize,
    /// Depth-limited NBC enumeration: `n <= nbc_depth_n` with `i_max <= nbc_depth_i`.
    pub nbc_depth_n: usize,
    pub nbc_depth_i: usize,
    pub chambers: usize,
    pub prototypes_i: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            whitney: 4,
            finite_field: 6,
            nbc_full: 6,
            nbc_depth_n: 7,
            nbc_depth_i: 4,
            chambers: 5,
            prototypes_i: 3,
        }
    }
}

impl Guards {
    pub fn unlimited() -> Self {
        Guards {
            whitney: usize::MAX,
            finite_field: usize::MAX,
            nbc_full: usize::MAX,
            nbc_depth_n: usize::MAX,
            nbc_depth_i: usize::MAX,
            chambers: usize::MAX,
            prototypes_i: usize::MAX,
        }
    }

    pub(crate) fn check(method: &'static str, requested: usize, limit: usize) -> Result<()> {
        if requested > limit {
            Err(Error::GuardExceeded {
                method,
                requested,
                limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_nbc(&self, n: usize, i_max: usize) -> Result<()> {
        if n <= self.nbc_full {
            return Ok(());
        }
        Self::check("depth-limited NBC enumeration (n)", n, self.nbc_depth_n)?;
        Self::check("depth-limited NBC enumeration (i_max)", i_max, self.nbc_depth_i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nbc_guard_allows_depth_limited_runs() {
        let g = Guards::default();
        assert!(g.check_nbc(6, 6).is_ok());
        assert!(g.check_nbc(7, 4).is_ok());
        assert!(g.check_nbc(7, 5).is_err());
        assert!(g.check_nbc(8, 3).is_err());
        assert!(Guards::unlimited().check_nbc(9, 9).is_ok());
    }
}
