use serde::{Deserialize, Serialize};

use super::Trace;

/// Samples closer than this (dB) count as one plateau.
const PLATEAU_TOL_DB: f64 = 1e-9;

/// Peaks are located within this depth below their top, at most.
const LOCATE_WIDTH_DB: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub distance_m: f64,
    pub power_db: f64,
    pub prominence_db: f64,
}

/// Local maxima of `trace` that stand at least `min_prominence_db` above
/// the surrounding floor, sorted by distance.
///
/// A peak is located at the midpoint of the stretch around it that stays
/// within half its prominence, or 3 dB, of the top. This centers flat OTDR
/// pulses riding on a sloped backscatter level.
///
/// Prominence follows the usual topographic definition: walk outwards on
/// each side until the trace rises above the peak or ends, take the lowest
/// point of each walk, and measure from the higher of the two.
pub fn detect_peaks(trace: &Trace, min_prominence_db: f64) -> Vec<Peak> {
    let y = &trace.power_db;
    let n = y.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if y[i] - y[i - 1] <= PLATEAU_TOL_DB {
            i += 1;
            continue;
        }
        // rising edge at i; find the end of its plateau
        let mut j = i;
        while j + 1 < n && (y[j + 1] - y[i]).abs() <= PLATEAU_TOL_DB {
            j += 1;
        }
        if j + 1 < n && y[i] - y[j + 1] > PLATEAU_TOL_DB {
            let top = y[i..=j].iter().cloned().fold(f64::MIN, f64::max);
            let prominence = top - base(y, i, j, top);
            if prominence >= min_prominence_db {
                let half = top - (prominence / 2.0).min(LOCATE_WIDTH_DB);
                let (mut a, mut b) = (i, j);
                while a > 0 && y[a - 1] >= half && y[a - 1] <= top + PLATEAU_TOL_DB {
                    a -= 1;
                }
                while b + 1 < n && y[b + 1] >= half && y[b + 1] <= top + PLATEAU_TOL_DB {
                    b += 1;
                }
                out.push(Peak {
                    distance_m: (trace.distance(a) + trace.distance(b)) / 2.0,
                    power_db: top,
                    prominence_db: prominence,
                });
            }
        }
        i = j + 1;
    }
    out
}

fn base(y: &[f64], left: usize, right: usize, top: f64) -> f64 {
    let mut lmin = top;
    for &v in y[..left].iter().rev() {
        if v > top + PLATEAU_TOL_DB {
            break;
        }
        lmin = lmin.min(v);
    }
    let mut rmin = top;
    for &v in &y[right + 1..] {
        if v > top + PLATEAU_TOL_DB {
            break;
        }
        rmin = rmin.min(v);
    }
    lmin.max(rmin)
}
