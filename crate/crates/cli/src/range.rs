use crate::error::{CliError, Result};

/// Slack when deciding whether `stop` is reached.
const STOP_SLACK: f64 = 1e-9;

/// Parses `start:stop:step` (stop inclusive within 1e-9), a single number,
/// or a comma-separated list of either.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let nums: Vec<f64> = part
            .split(':')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::Config(format!("bad number `{s}` in range `{text}`")))
            })
            .collect::<Result<_>>()?;
        match nums.as_slice() {
            [v] => out.push(*v),
            [start, stop, step] => {
                if !(*step > 0.0) || stop < start {
                    return Err(CliError::Config(format!(
                        "range `{part}` needs step > 0 and start <= stop"
                    )));
                }
                let count = ((stop - start) / step + STOP_SLACK).floor() as usize;
                if count > 1_000_000 {
                    return Err(CliError::Config(format!("range `{part}` is too long")));
                }
                out.extend((0..=count).map(|i| clean(start + i as f64 * step)));
            }
            _ => {
                return Err(CliError::Config(format!(
                    "range `{part}` must be start:stop:step or a number"
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Config(format!("empty range `{text}`")));
    }
    Ok(out)
}

/// Snaps to 12 decimals so `0.1:0.3:0.1` yields `0.3`, not `0.30000000000000004`.
fn clean(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

/// Parses `a:b` as an inclusive level window.
pub fn parse_window(text: &str) -> Result<(usize, usize)> {
    let bad = || CliError::Config(format!("window `{text}` must be `start:end`"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b < a {
        return Err(bad());
    }
    Ok((a, b))
}
