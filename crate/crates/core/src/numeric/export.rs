//! Solver input files in the Bertini dialect, and a reader for the subset
//! of that dialect we emit.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::game::{parse_rational, Monomial, Polynomial, PolynomialSystem, VariableLayout};

fn coefficient_text(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

fn polynomial_text(poly: &Polynomial, layout: &VariableLayout) -> String {
    if poly.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (mono, coef)) in poly.terms().enumerate() {
        let negative = coef.is_negative();
        let magnitude = coef.abs();
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        if mono.vars().is_empty() || !magnitude.is_one() {
            factors.push(coefficient_text(&magnitude));
        }
        factors.extend(mono.vars().iter().map(|&v| layout.var_name(v)));
        out.push_str(&factors.join("*"));
    }
    out
}

/// Renders the system as a solver input file. Terms follow the system's
/// monomial order, so the output is byte-stable.
pub fn solver_input_text(system: &PolynomialSystem) -> Result<String> {
    let layout = system.layout();
    let d = system.dim();
    if d == 0 {
        return Err(Error::invalid("refusing to export an empty system"));
    }
    let vars: Vec<String> = (0..d).map(|v| layout.var_name(v)).collect();
    let funcs: Vec<String> = (0..d).map(|e| layout.eq_name(e)).collect();
    let mut out = String::from("CONFIG\nTRACKTYPE: 0;\nEND;\n\nINPUT\n");
    out.push_str(&format!("variable_group {};\n", vars.join(", ")));
    out.push_str(&format!("function {};\n", funcs.join(", ")));
    for (e, poly) in system.equations().iter().enumerate() {
        out.push_str(&format!("{} = {};\n", funcs[e], polynomial_text(poly, layout)));
    }
    out.push_str("END;\n");
    Ok(out)
}

pub fn export_solver_input(system: &PolynomialSystem, path: &Path) -> Result<()> {
    let text = solver_input_text(system)?;
    std::fs::write(path, text)?;
    Ok(())
}

fn parse_index_name(name: &str, prefix: char) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("unexpected name {name:?}"));
    let rest = name.strip_prefix(prefix).and_then(|r| r.strip_prefix('_')).ok_or_else(bad)?;
    let (p, s) = rest.split_once('_').ok_or_else(bad)?;
    let p: usize = p.parse().map_err(|_| bad())?;
    let s: usize = s.parse().map_err(|_| bad())?;
    if p == 0 || s == 0 {
        return Err(bad());
    }
    Ok((p - 1, s))
}

fn parse_term(text: &str, index: &BTreeMap<String, usize>) -> Result<(Monomial, BigRational)> {
    let mut coef = BigRational::one();
    let mut vars = Vec::new();
    for factor in text.split('*') {
        let factor = factor.trim();
        if let Some(&v) = index.get(factor) {
            vars.push(v);
        } else {
            let inner = factor
                .strip_prefix('(')
                .and_then(|f| f.strip_suffix(')'))
                .unwrap_or(factor);
            coef *= parse_rational(inner)?;
        }
    }
    Ok((Monomial::new(vars), coef))
}

fn parse_polynomial(text: &str, index: &BTreeMap<String, usize>) -> Result<Polynomial> {
    let mut poly = Polynomial::new();
    let text = text.trim();
    if text == "0" {
        return Ok(poly);
    }
    let (mut sign, mut rest) = match text.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, text),
    };
    loop {
        let cut = [" + ", " - "]
            .iter()
            .filter_map(|op| rest.find(op).map(|p| (p, *op)))
            .min();
        let (term, next) = match cut {
            Some((p, op)) => (&rest[..p], Some((op, &rest[p + 3..]))),
            None => (rest, None),
        };
        let (mono, coef) = parse_term(term, index)?;
        poly.add_term(mono, coef * BigRational::from_integer(BigInt::from(sign)));
        match next {
            Some((op, r)) => {
                sign = if op == " - " { -1 } else { 1 };
                rest = r;
            }
            None => break,
        }
    }
    Ok(poly)
}

/// Reads a file produced by [`solver_input_text`] back into a system. The
/// layout is recovered from the `x_i_s` variable names.
pub fn parse_solver_input(text: &str) -> Result<PolynomialSystem> {
    let body = text
        .split_once("INPUT")
        .map(|(_, b)| b)
        .ok_or_else(|| Error::Parse("missing INPUT section".into()))?;
    let mut vars: Vec<String> = Vec::new();
    let mut funcs: Vec<String> = Vec::new();
    let mut defs: BTreeMap<String, String> = BTreeMap::new();
    for stmt in body.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        if stmt == "END" {
            break;
        }
        if let Some(list) = stmt.strip_prefix("variable_group ") {
            vars = list.split(',').map(|s| s.trim().to_string()).collect();
        } else if let Some(list) = stmt.strip_prefix("function ") {
            funcs = list.split(',').map(|s| s.trim().to_string()).collect();
        } else if let Some((lhs, rhs)) = stmt.split_once('=') {
            defs.insert(lhs.trim().to_string(), rhs.trim().to_string());
        } else {
            return Err(Error::Parse(format!("unrecognized statement {stmt:?}")));
        }
    }
    let mut dims: Vec<usize> = Vec::new();
    for (pos, name) in vars.iter().enumerate() {
        let (p, s) = parse_index_name(name, 'x')?;
        if p == dims.len() && s == 1 {
            dims.push(1);
        } else if p + 1 == dims.len() && s == dims[p] + 1 {
            dims[p] += 1;
        } else {
            return Err(Error::Parse(format!("variable {name} out of order at position {pos}")));
        }
    }
    let layout = VariableLayout::new(dims);
    let index: BTreeMap<String, usize> = vars.iter().cloned().zip(0..).collect();
    let mut equations = Vec::with_capacity(funcs.len());
    for f in &funcs {
        let rhs = defs
            .get(f)
            .ok_or_else(|| Error::Parse(format!("function {f} declared but not defined")))?;
        equations.push(parse_polynomial(rhs, &index)?);
    }
    PolynomialSystem::new(layout, equations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_indifference_system, cyclic_matching_pennies, sample_generic_payoffs};
    use crate::game::{topology_factory, Topology, UniformPayoffs};

    #[test]
    fn matching_pennies_golden() {
        let sys = build_indifference_system(&cyclic_matching_pennies(2).unwrap());
        let expected = "CONFIG\nTRACKTYPE: 0;\nEND;\n\nINPUT\n\
                        variable_group x_1_1, x_2_1;\n\
                        function f_1_1, f_2_1;\n\
                        f_1_1 = -2 + 4*x_2_1;\n\
                        f_2_1 = -2 + 4*x_1_1;\n\
                        END;\n";
        assert_eq!(solver_input_text(&sys).unwrap(), expected);
    }

    #[test]
    fn round_trip_random_games() {
        for (t, k) in [(Topology::CrossPrism(3), 1), (Topology::Cycle(3), 2)] {
            let g = topology_factory(&t).unwrap();
            let n = g.vertex_count();
            let game = sample_generic_payoffs(&g, &vec![k; n], UniformPayoffs::PAPER_RANGE, 11).unwrap();
            let sys = build_indifference_system(&game);
            let back = parse_solver_input(&solver_input_text(&sys).unwrap()).unwrap();
            assert_eq!(back, sys);
        }
    }

    #[test]
    fn empty_system_refused() {
        let sys = PolynomialSystem::new(VariableLayout::new(vec![]), vec![]).unwrap();
        assert!(solver_input_text(&sys).is_err());
    }

    #[test]
    fn unit_coefficients_and_fractions() {
        let layout = VariableLayout::new(vec![1, 1]);
        let mut p = Polynomial::new();
        p.add_term(Monomial::new(vec![1]), BigRational::one());
        p.add_term(Monomial::one(), BigRational::new(BigInt::from(-3), BigInt::from(7)));
        let sys = PolynomialSystem::new(layout, vec![p.clone(), p]).unwrap();
        let text = solver_input_text(&sys).unwrap();
        assert!(text.contains("f_1_1 = -(3/7) + x_2_1;"));
        assert_eq!(parse_solver_input(&text).unwrap(), sys);
    }
}
