//! Complex literals: `a`, `bi`, `a+bi`, `a-bi` (no spaces), and `σ=M` pairs.

use ddinterp_core::{Complex64, InterpolationPair};

fn parse_real(text: &str, whole: &str) -> Result<f64, String> {
    let value: f64 = text
        .parse()
        .map_err(|_| format!("invalid complex literal `{whole}`"))?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("complex literal `{whole}` is not finite"))
    }
}

fn parse_imag_coefficient(text: &str, whole: &str) -> Result<f64, String> {
    match text {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(text, whole),
    }
}

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    if text.is_empty() || text.chars().any(char::is_whitespace) {
        return Err(format!("invalid complex literal `{text}`"));
    }
    let Some(body) = text.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(parse_real(text, text)?, 0.0));
    };
    let bytes = body.as_bytes();
    // sign that separates the real part, skipping exponent signs
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(
            parse_real(&body[..k], text)?,
            parse_imag_coefficient(&body[k..], text)?,
        )),
        None => Ok(Complex64::new(0.0, parse_imag_coefficient(body, text)?)),
    }
}

pub fn parse_pair(text: &str) -> Result<InterpolationPair, String> {
    let (sigma, m) = text
        .split_once('=')
        .ok_or_else(|| format!("pair `{text}` must have the form SIGMA=VALUE"))?;
    Ok(InterpolationPair::new(
        parse_complex(sigma)?,
        parse_complex(m)?,
    ))
}

pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{:.6}", c.re)
    } else {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        format!("{:.6}{sign}{:.6}i", c.re, c.im.abs())
    }
}
