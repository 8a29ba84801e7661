//! Cell polarization from per-dot charge.

use super::SimError;

/// Charge on dots 1..4 of a planar cell (index 0 is dot 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeState4(pub [f64; 4]);

/// Charge on dots 1..8 of a cube cell (index 0 is dot 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeState8(pub [f64; 8]);

fn total(q: &[f64]) -> Result<f64, SimError> {
    if let Some(i) = q.iter().position(|&r| r.is_nan() || r < 0.0 || r.is_infinite()) {
        return Err(SimError::InvalidCharge { dot: i + 1, charge: q[i] });
    }
    let sum: f64 = q.iter().sum();
    if sum == 0.0 {
        return Err(SimError::DegenerateCharge);
    }
    Ok(sum)
}

/// `((ρ2+ρ4) − (ρ1+ρ3)) / Σρ`
pub fn polarization_4dot(q: &ChargeState4) -> Result<f64, SimError> {
    let r = &q.0;
    let sum = total(r)?;
    Ok(((r[1] + r[3]) - (r[0] + r[2])) / sum)
}

/// `((ρ1+ρ3+ρ6+ρ8) − (ρ2+ρ4+ρ5+ρ7)) / Σρ`
pub fn polarization_8dot(q: &ChargeState8) -> Result<f64, SimError> {
    let r = &q.0;
    let sum = total(r)?;
    Ok(((r[0] + r[2] + r[5] + r[7]) - (r[1] + r[3] + r[4] + r[6])) / sum)
}
