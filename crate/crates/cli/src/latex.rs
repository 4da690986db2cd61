//! LaTeX and plain-text renderings of decompositions.

use det_waring::cyclotomic::Cyc;
use det_waring::decompositions::{PowerDecomposition, ProductDecomposition, Target};
use det_waring::multipoly::{LinForm, VarId};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

fn omega_power(k: u32) -> String {
    match k {
        0 => "1".to_string(),
        1 => "\\omega".to_string(),
        _ => format!("\\omega^{{{k}}}"),
    }
}

/// A coefficient as `(negative, magnitude)`, where the magnitude is empty
/// for 1. General field elements are parenthesized.
fn split_coeff(c: &Cyc) -> (bool, String) {
    if let Some(k) = c.as_root_power() {
        return (false, if k == 0 { String::new() } else { omega_power(k) });
    }
    if let Some(k) = (-c).as_root_power() {
        return (true, if k == 0 { String::new() } else { omega_power(k) });
    }
    if let Some(q) = c.to_rational() {
        let abs = q.abs();
        let mag = if abs.is_integer() {
            abs.to_integer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
        };
        return (q.is_negative(), mag);
    }
    let mut parts = Vec::new();
    for (k, q) in c.coeffs().iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        let sign = if q.is_negative() { "-" } else { "+" };
        let abs = q.abs();
        let num = if abs.is_one() && k > 0 {
            String::new()
        } else if abs.is_integer() {
            abs.to_integer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
        };
        let pw = if k == 0 { String::new() } else { omega_power(k as u32) };
        parts.push((sign, format!("{num}{pw}")));
    }
    let mut s = String::from("\\left(");
    for (n, (sign, body)) in parts.iter().enumerate() {
        if n == 0 {
            if *sign == "-" {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        s.push_str(body);
    }
    s.push_str("\\right)");
    (false, s)
}

fn var(v: VarId) -> String {
    format!("x_{{{},{}}}", v.row(), v.col())
}

fn form_body(form: &LinForm) -> String {
    let mut s = String::new();
    for (n, (v, c)) in form.support().into_iter().enumerate() {
        let (neg, mag) = split_coeff(c);
        match (n, neg) {
            (0, true) => s.push_str("- "),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        if !mag.is_empty() {
            s.push_str(&mag);
            s.push(' ');
        }
        s.push_str(&var(v));
    }
    s
}

fn lhs(scale: &BigInt, target: Target, d: usize) -> String {
    let scale = if scale.is_one() { String::new() } else { format!("{scale} ") };
    let body = match target {
        Target::Det => format!("\\det\\nolimits_{{{d}}}"),
        Target::DiagonalProduct => (1..=d).map(|i| var(VarId::new(i, i))).collect::<Vec<_>>().join(" "),
    };
    format!("{scale}{body}")
}

fn push_signed(out: &mut String, first: bool, neg: bool, body: &str) {
    out.push_str("  ");
    match (first, neg) {
        (true, false) => {}
        (true, true) => out.push_str("- "),
        (false, false) => out.push_str("+ "),
        (false, true) => out.push_str("- "),
    }
    out.push_str(body);
    out.push('\n');
}

/// `scale * target = sum of signed powers`, one term per line.
pub fn decomposition_latex(dec: &PowerDecomposition) -> String {
    let mut out = format!("\\[\n  {} =\n", lhs(&dec.scale, dec.target, dec.d));
    for (n, t) in dec.terms.iter().enumerate() {
        let (neg, mag) = split_coeff(&t.coeff);
        let mag = if mag.is_empty() { String::new() } else { format!("{mag} ") };
        let body = format!("{mag}\\left( {} \\right)^{{{}}}", form_body(&t.form), t.exponent);
        push_signed(&mut out, n == 0, neg, &body);
    }
    out.push_str("\\]\n");
    out
}

pub fn product_latex(pd: &ProductDecomposition) -> String {
    let mut out = format!("\\[\n  \\det\\nolimits_{{{}}} =\n", pd.d);
    for (n, t) in pd.terms.iter().enumerate() {
        let body = t
            .factors
            .iter()
            .map(|f| {
                if f.support().len() == 1 {
                    form_body(f)
                } else {
                    format!("\\left( {} \\right)", form_body(f))
                }
            })
            .collect::<Vec<_>>()
            .join(" \\, ");
        push_signed(&mut out, n == 0, t.sign < 0, &body);
    }
    out.push_str("\\]\n");
    out
}

fn form_text(form: &LinForm) -> String {
    form.support()
        .into_iter()
        .map(|(v, c)| {
            if c.is_one() {
                v.to_string()
            } else {
                format!("({c})*{v}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn decomposition_text(dec: &PowerDecomposition) -> String {
    let target = match dec.target {
        Target::Det => format!("det_{}", dec.d),
        Target::DiagonalProduct => (1..=dec.d).map(|i| VarId::new(i, i).to_string()).collect::<Vec<_>>().join("*"),
    };
    let mut out = format!(
        "{} {target} = sum of {} terms\n",
        dec.scale,
        dec.terms.len()
    );
    for t in &dec.terms {
        out.push_str(&format!("  ({}) * ({})^{}\n", t.coeff, form_text(&t.form), t.exponent));
    }
    out
}

pub fn product_text(pd: &ProductDecomposition) -> String {
    let mut out = format!("det_{} = sum of {} products\n", pd.d, pd.terms.len());
    for t in &pd.terms {
        let body = t.factors.iter().map(|f| format!("({})", form_text(f))).collect::<Vec<_>>().join(" * ");
        out.push_str(&format!("  {} {body}\n", if t.sign < 0 { "-" } else { "+" }));
    }
    out
}
