//! Parameter sweeps: `start..end[:step]` (inclusive end), `start..end:xk`
//! (geometric), or comma lists. Values may be written as fractions (`1/3`).

pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => parse_plain(a)? / parse_plain(b)?,
        None => parse_plain(s)?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: {s}"))
    }
}

fn parse_plain(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("not a number: {s}"))
}

pub fn parse_floats(spec: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        match part.split_once("..") {
            None => out.push(parse_number(part)?),
            Some((start, rest)) => {
                let (end, step) = match rest.split_once(':') {
                    Some((e, s)) => (e, Some(s.trim())),
                    None => (rest, None),
                };
                let (start, end) = (parse_number(start)?, parse_number(end)?);
                if end < start {
                    return Err(format!("empty range {part}"));
                }
                match step {
                    Some(s) if s.starts_with('x') => {
                        let f = parse_number(&s[1..])?;
                        if !(f > 1.0 && start > 0.0) {
                            return Err(format!("geometric range needs factor > 1 and start > 0: {part}"));
                        }
                        let mut v = start;
                        while v <= end * (1.0 + 1e-12) {
                            out.push(v);
                            v *= f;
                        }
                    }
                    _ => {
                        let step = step.map(parse_number).transpose()?.unwrap_or(1.0);
                        if step <= 0.0 || step.is_nan() {
                            return Err(format!("step must be positive: {part}"));
                        }
                        // index-based so long decimal sweeps do not drift
                        let count = ((end - start) / step * (1.0 + 1e-12)).floor() as usize;
                        out.extend((0..=count).map(|i| start + i as f64 * step));
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn parse_counts(spec: &str) -> Result<Vec<u32>, String> {
    parse_floats(spec)?
        .into_iter()
        .map(|v| {
            let r = v.round();
            if (v - r).abs() > 1e-9 || r < 1.0 || r > u32::MAX as f64 {
                Err(format!("expected a positive integer, got {v}"))
            } else {
                Ok(r as u32)
            }
        })
        .collect()
}
