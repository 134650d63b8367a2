//! Number formatting for reports and CSV output.

/// Shortest round-trip decimal text for `x` (at most 17 significant
/// digits), positional for moderate magnitudes and exponent form otherwise.
/// Locale independent.
pub fn decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let exp = x.abs().log10().floor();
    if (-5.0..17.0).contains(&exp) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Hexadecimal-significand text (`0x1.8p-1`), exact for every f64.
pub fn hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let mantissa = bits & ((1u64 << 52) - 1);
    if biased == 0 && mantissa == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if biased == 0 {
        (0, -1022)
    } else {
        (1, biased - 1023)
    };
    let mut digits = format!("{mantissa:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    let dot = if digits.is_empty() { "" } else { "." };
    let esign = if exp >= 0 { "+" } else { "-" };
    format!("{sign}0x{lead}{dot}{digits}p{esign}{}", exp.abs())
}

/// Parses the output of [`hex`].
pub fn parse_hex(s: &str) -> Option<f64> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let value = match body {
        "nan" => f64::NAN,
        "inf" => f64::INFINITY,
        _ => {
            let body = body.strip_prefix("0x")?;
            let (sig, exp) = body.split_once('p')?;
            let exp: i32 = exp.parse().ok()?;
            let (lead, frac) = sig.split_once('.').unwrap_or((sig, ""));
            if frac.len() > 13 {
                return None;
            }
            let lead = u64::from_str_radix(lead, 16).ok()?;
            let frac = if frac.is_empty() {
                0
            } else {
                u64::from_str_radix(frac, 16).ok()? << (4 * (13 - frac.len()))
            };
            match (lead, exp) {
                (0, _) if frac == 0 => 0.0,
                (0, -1022) => f64::from_bits(frac),
                (1, -1022..=1023) => f64::from_bits((((exp + 1023) as u64) << 52) | frac),
                _ => return None,
            }
        }
    };
    Some(if negative { -value } else { value })
}
