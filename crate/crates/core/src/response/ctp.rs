use num_complex::Complex64;

use super::{Components, ResponseBlocks};

/// 2x2 block over the CTP branch indices.
pub type CtpBlock = [[Complex64; 2]; 2];

/// The full particle-hole propagator in CTP form, one 2x2 block per tensor
/// component:
///
/// ```text
/// [[ L - iS+,   iS- - iS+ ],
///  [ -iS- - iS+, -L - iS+ ]]
/// ```
pub type CtpMatrix = Components<CtpBlock>;

/// Retarded propagator `G^r = -L + iS-`, per component.
pub type RetardedPropagator = Components<Complex64>;

pub fn assemble_ctp(blocks: &ResponseBlocks) -> CtpMatrix {
    let s_plus = blocks.s_plus();
    let s_minus = blocks.s_minus();
    let i = Complex64::i();
    let per_component = |l: f64, sp: f64, sm: f64| -> CtpBlock {
        [
            [Complex64::from(l) - i * sp, i * sm - i * sp],
            [-i * sm - i * sp, Complex64::from(-l) - i * sp],
        ]
    };
    Components {
        tt: per_component(blocks.lindhard.tt, s_plus.tt, s_minus.tt),
        ts: per_component(blocks.lindhard.ts, s_plus.ts, s_minus.ts),
        l: per_component(blocks.lindhard.l, s_plus.l, s_minus.l),
        t: per_component(blocks.lindhard.t, s_plus.t, s_minus.t),
    }
}

pub fn retarded(blocks: &ResponseBlocks) -> RetardedPropagator {
    blocks.lindhard.zip(blocks.s_minus(), |l, sm| Complex64::new(-l, sm))
}

/// Linear response of the current to the auxiliary source, `L + iS- =
/// -conj(G^r)`, in the sign and time convention of the static and
/// hydrodynamic equations of motion (static density response `= L`,
/// damping term `+i a_z z` with `a_z > 0`).
pub fn source_response(blocks: &ResponseBlocks) -> Components<Complex64> {
    retarded(blocks).map(|g| -g.conj())
}
