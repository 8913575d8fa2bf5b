//! Reference solver process used by the search harness and its tests.
//!
//! Usage: `blocksens-refsat <file.cnf>`. Prints `s SATISFIABLE` with `v` lines
//! (exit 10) or `s UNSATISFIABLE` (exit 20). Any other outcome prints
//! `s UNKNOWN` and exits 0.

use std::fs;
use std::process::ExitCode;

use batsat::{lbool, BasicSolver, Lit, SolverInterface, Var};

fn parse_dimacs(text: &str) -> Result<(usize, Vec<Vec<i64>>), String> {
    let mut declared_vars = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p") {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(format!("line {}: malformed header", lineno + 1));
            }
            let vars = fields[1]
                .parse::<usize>()
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
            declared_vars = Some(vars);
            continue;
        }
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|e| format!("line {}: bad literal {tok:?}: {e}", lineno + 1))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let vars = declared_vars.ok_or_else(|| "missing 'p cnf' header".to_string())?;
    if let Some(bad) = clauses.iter().flatten().find(|l| l.unsigned_abs() as usize > vars) {
        return Err(format!("literal {bad} exceeds declared variable count {vars}"));
    }
    Ok((vars, clauses))
}

fn main() -> ExitCode {
    let Some(path) = std::env::args().nth(1) else {
        eprintln!("usage: blocksens-refsat <file.cnf>");
        return ExitCode::from(1);
    };
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("c cannot read {path}: {e}");
            return ExitCode::from(1);
        }
    };
    let (var_count, clauses) = match parse_dimacs(&text) {
        Ok(parsed) => parsed,
        Err(e) => {
            eprintln!("c parse error: {e}");
            return ExitCode::from(1);
        }
    };

    let mut solver = BasicSolver::default();
    let vars: Vec<Var> = (0..var_count).map(|_| solver.new_var_default()).collect();
    let mut ok = true;
    let mut buf = Vec::new();
    for clause in &clauses {
        buf.clear();
        buf.extend(
            clause
                .iter()
                .map(|&l| Lit::new(vars[l.unsigned_abs() as usize - 1], l > 0)),
        );
        if !solver.add_clause_reuse(&mut buf) {
            ok = false;
            break;
        }
    }

    let result = if ok { solver.solve_limited(&[]) } else { lbool::FALSE };
    if result == lbool::TRUE {
        println!("s SATISFIABLE");
        let mut line = String::from("v");
        for (i, &v) in vars.iter().enumerate() {
            let value = solver.value_lit(Lit::new(v, true)) == lbool::TRUE;
            let lit = if value { (i + 1) as i64 } else { -((i + 1) as i64) };
            line.push(' ');
            line.push_str(&lit.to_string());
            if line.len() > 72 {
                println!("{line}");
                line = String::from("v");
            }
        }
        println!("{line} 0");
        ExitCode::from(10)
    } else if result == lbool::FALSE {
        println!("s UNSATISFIABLE");
        ExitCode::from(20)
    } else {
        println!("s UNKNOWN");
        ExitCode::SUCCESS
    }
}
