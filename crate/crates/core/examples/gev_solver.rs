//! Solves a small generalized symmetric eigenproblem L a = λ B a and checks
//! the residuals and the constraint A B A^T = I.
//!
//! cargo run --example gev_solver

use nalgebra::{dmatrix, DMatrix};
use ssdr::solver::{regularize, solve_gev};
use ssdr::Result;

fn main() -> Result<()> {
    let l = dmatrix![
        4.0, 1.0, 0.5;
        1.0, 3.0, 0.2;
        0.5, 0.2, 1.0
    ];
    let b = regularize(
        &dmatrix![
            2.0, 0.3, 0.0;
            0.3, 1.0, 0.1;
            0.0, 0.1, 0.5
        ],
        0.01,
    );
    let sol = solve_gev(&l, &b, 3)?;
    println!("eigenvalues: {:.6?}", sol.eigenvalues.as_slice());
    for (i, lambda) in sol.eigenvalues.iter().enumerate() {
        let a = sol.a.row(i).transpose();
        let r = &l * &a - &b * &a * *lambda;
        println!("  pair {i}: residual {:.2e}", r.norm());
    }
    let gram = &sol.a * &b * sol.a.transpose();
    println!(
        "constraint error ‖ABA^T - I‖ = {:.2e}",
        (gram - DMatrix::<f64>::identity(3, 3)).norm()
    );
    Ok(())
}
