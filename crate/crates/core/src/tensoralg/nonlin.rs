/// Coefficient tensors of the quadratic and cubic parts of the equation's
/// nonlinearity, indexed `[i][j][k][l]`:
///
/// `A(U, U')_l = A^{ijk}_l [U_j, d_i U'_k]`,
/// `B(U, U', U'')_l = B^{ijk}_l [U_j, [U'_k, U''_i]]`.
#[derive(Clone, Debug)]
pub struct NonlinTensors {
    pub a: [[[[f64; 3]; 3]; 3]; 3],
    pub b: [[[[f64; 3]; 3]; 3]; 3],
}

/// `A^{ijk}_l = 2 d_ij d_kl - d_il d_jk`, `B^{ijk}_l = d_il d_jk`.
pub fn nonlin_tensors() -> NonlinTensors {
    let mut a = [[[[0.0; 3]; 3]; 3]; 3];
    let mut b = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let d = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
                    a[i][j][k][l] = 2.0 * d(i, j) * d(k, l) - d(i, l) * d(j, k);
                    b[i][j][k][l] = d(i, l) * d(j, k);
                }
            }
        }
    }
    NonlinTensors { a, b }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_entries() {
        let t = nonlin_tensors();
        assert_eq!(t.a[0][0][0][0], 1.0); // 2 - 1
        assert_eq!(t.a[0][1][2][1], 0.0);
        assert_eq!(t.b[1][0][1][1], 1.0); // d_11 d_00
        assert_eq!(t.b[0][1][1][0], 1.0);
        assert_eq!(t.b[0][1][2][0], 0.0);
    }
}
