//! Grid parsing (`lo:hi:n` inclusive linear spacing) and per-identity
//! domain validation.

use zeta_mellin::IdentityId;

/// Parses `lo:hi:n` into `n` inclusive linearly spaced points, or a bare
/// number into a one-point grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.len() {
        1 => {
            let v: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| format!("cannot parse grid point '{spec}'"))?;
            if !v.is_finite() {
                return Err(format!("grid point '{spec}' is not finite"));
            }
            Ok(vec![v])
        }
        3 => {
            let lo: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| format!("cannot parse grid bound '{}'", parts[0]))?;
            let hi: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|_| format!("cannot parse grid bound '{}'", parts[1]))?;
            let n: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| format!("cannot parse grid count '{}'", parts[2]))?;
            if !lo.is_finite() || !hi.is_finite() {
                return Err("grid bounds must be finite".to_string());
            }
            if n == 0 {
                return Err("grid count must be >= 1".to_string());
            }
            if n == 1 && lo != hi {
                return Err("a one-point grid needs lo == hi".to_string());
            }
            if hi < lo {
                return Err("grid needs lo <= hi".to_string());
            }
            Ok((0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / (n - 1) as f64
                    }
                })
                .collect())
        }
        _ => Err(format!("grid '{spec}' must be 'lo:hi:n' or a single number")),
    }
}

/// The grid used when the relevant `--s`/`--x` flag is absent.
pub fn default_spec(id: IdentityId) -> &'static str {
    if !id.grid_is_x() {
        return "0.2:0.8:5";
    }
    match id {
        IdentityId::Ps1 | IdentityId::Ps2 => "0.1:0.9:9",
        IdentityId::Eq2_1 | IdentityId::Eq2_2 | IdentityId::Eq2_3 => "0:2:5",
        _ => "0.3:1.5:5",
    }
}

/// Rejects grids outside each identity's domain with a usage-level message.
pub fn check_domain(id: IdentityId, grid: &[f64]) -> Result<(), String> {
    if !id.grid_is_x() {
        if grid.iter().any(|&s| !(s > 0.0 && s < 1.0)) {
            return Err("s outside critical strip".to_string());
        }
        return Ok(());
    }
    match id {
        IdentityId::Ps1 | IdentityId::Ps2 => {
            if grid.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
                return Err(format!("x outside (0,1) for the power series (id {id})"));
            }
        }
        IdentityId::Eq2_1 | IdentityId::Eq2_2 | IdentityId::Eq2_3 => {
            if grid.iter().any(|&x| !(0.0..=5.0).contains(&x)) {
                return Err(format!(
                    "x outside [0,5] for the cosine-kernel integrals (id {id})"
                ));
            }
        }
        _ => {
            // `!(x > 0.0)` also rejects NaN, which `x <= 0.0` would admit.
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if grid.iter().any(|&x| !(x > 0.0)) {
                return Err(format!("x must be positive (id {id})"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_linear_spacing() {
        let g = parse_grid("0.2:0.8:5").unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.2);
        assert_eq!(g[4], 0.8);
        assert!((g[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bare_number_is_one_point() {
        assert_eq!(parse_grid("1.5").unwrap(), vec![1.5]);
    }

    #[test]
    fn one_point_range_needs_equal_bounds() {
        assert!(parse_grid("0.2:0.8:1").is_err());
        assert_eq!(parse_grid("0.5:0.5:1").unwrap(), vec![0.5]);
    }

    #[test]
    fn malformed_specs_are_rejected() {
        for bad in ["", "a", "0.1:0.9", "0.1:0.9:0", "0.9:0.1:3", "1:2:3:4"] {
            assert!(parse_grid(bad).is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn strip_and_domain_rules() {
        assert!(check_domain(IdentityId::Eq1_4, &[0.5]).is_ok());
        assert_eq!(
            check_domain(IdentityId::Eq1_4, &[1.5]).unwrap_err(),
            "s outside critical strip"
        );
        assert!(check_domain(IdentityId::Ps1, &[0.5]).is_ok());
        assert!(check_domain(IdentityId::Ps1, &[1.5]).is_err());
        assert!(check_domain(IdentityId::Eq2_1, &[0.0, 5.0]).is_ok());
        assert!(check_domain(IdentityId::Eq2_1, &[5.5]).is_err());
        assert!(check_domain(IdentityId::Eq1_6, &[0.3]).is_ok());
        assert!(check_domain(IdentityId::Eq1_6, &[0.0]).is_err());
    }
}
