use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PeriodStatus {
    Detected,
    Unresolved,
}

/// Outcome of scanning a finite sequence for eventual periodicity.
/// Detection is evidence up to the horizon, not a proof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodResult {
    pub preperiod: usize,
    pub period: usize,
    /// Full periods observed after the preperiod.
    pub confirmed_periods: usize,
    pub confirm_window: usize,
    pub horizon: usize,
    pub status: PeriodStatus,
}

impl PeriodResult {
    pub fn detected(&self) -> bool {
        self.status == PeriodStatus::Detected
    }
}

/// Smallest period T (then smallest preperiod P) such that r[n + T] = r[n]
/// for all P <= n < len - T, at least `confirm_window` full periods fit after
/// P, and P <= len / 2.
pub fn periodicity_detect(residues: &[u64], confirm_window: usize) -> PeriodResult {
    let len = residues.len();
    let window = confirm_window.max(1);
    let unresolved = PeriodResult {
        preperiod: 0,
        period: 0,
        confirmed_periods: 0,
        confirm_window,
        horizon: len,
        status: PeriodStatus::Unresolved,
    };
    if len < 4 * window {
        return unresolved;
    }
    for period in 1..=len / 2 {
        // Walk back from the end while the shift matches.
        let mut preperiod = len - period;
        while preperiod > 0 && residues[preperiod - 1] == residues[preperiod - 1 + period] {
            preperiod -= 1;
        }
        let confirmed = (len - preperiod) / period;
        if preperiod <= len / 2 && confirmed >= window {
            return PeriodResult {
                preperiod,
                period,
                confirmed_periods: confirmed,
                confirm_window,
                horizon: len,
                status: PeriodStatus::Detected,
            };
        }
    }
    unresolved
}
