//! Mahler measures of bivariate Laurent polynomials and the numerical
//! machinery around the hyperelliptic families
//!
//! ```text
//! P_k = (x^2+x+1) y^2 + k x (x+1) y + x (x^2+x+1)
//! Q_k = (x^2+x+1) y^2 + (x^4 + k x^3 + (2k-4) x^2 + k x + 1) y + x^2 (x^2+x+1)
//! R_k = y^3 - y + x^3 - x + k x y
//! ```
//!
//! * [`lpoly`]: exact polynomial arithmetic, parsing, Newton polygons.
//! * [`quad`]: tanh-sinh / Gauss–Kronrod quadrature and the torus rule.
//! * [`mahler`]: Mahler measures by Jensen's formula and by direct torus
//!   averaging.
//! * [`families`]: one-dimensional integral representations of the
//!   measures of the three families and their `k`-derivatives.
//! * [`elliptic`]: Carlson's `R_F`, periods of real cubics and the
//!   Landen-type period identity.
//! * [`specialfn`]: Bloch–Wigner dilogarithm, Hurwitz zeta and Dirichlet
//!   L-values.
//! * [`eclf`]: elliptic-curve L-functions via point counting and the
//!   smoothed functional equation.

pub mod eclf;
pub mod elliptic;
pub mod families;
pub mod lpoly;
pub mod mahler;
pub mod quad;
pub mod roots;
pub mod specialfn;
