use crate::acoustic::AcousticParams;
use crate::error::{Error, Result};
use crate::functionals::Window;
use crate::grid::Grid;

/// Longest time before waves leaving the observation box can re-enter it
/// through the periodic boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscapeWindow {
    pub t_max: f64,
    /// Fastest group speed among the represented modes.
    pub v_g_max: f64,
    /// Distance from the box to the cell boundary.
    pub distance: f64,
}

/// `T_max = dist(K, ∂box) / max_{|k| ≤ k_max} |ω'(k)|`, scanning the lattice
/// magnitudes `n·2π/L` up to `k_max` and `k_max` itself.
pub fn wave_escape_window(
    grid: &Grid,
    params: &AcousticParams,
    k_max: f64,
    window: &Window,
) -> Result<EscapeWindow> {
    window.validate(grid)?;
    let distance = window.distance_to_boundary(grid);
    if !(distance > 0.0) {
        return Err(Error::Domain(
            "observation box touches the cell boundary; use a smaller window or a larger L".into(),
        ));
    }
    if !(k_max > 0.0) {
        return Err(Error::Domain(format!("k_max must be positive, got {k_max}")));
    }
    let k0 = grid.fundamental();
    let mut v = params.group_velocity(k_max);
    let mut n = 0usize;
    while (n as f64) * k0 <= k_max {
        v = v.max(params.group_velocity(n as f64 * k0));
        n += 1;
    }
    Ok(EscapeWindow {
        t_max: distance / v,
        v_g_max: v,
        distance,
    })
}

/// Rejects horizons shorter than `min_horizon`.
pub fn require_horizon(w: &EscapeWindow, min_horizon: f64) -> Result<()> {
    if w.t_max < min_horizon {
        return Err(Error::Domain(format!(
            "escape horizon {:.3e} is below the minimum {:.3e}; increase the box length L",
            w.t_max, min_horizon
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_wave_speed() {
        let g = Grid::new(2, 32, 8.0).unwrap();
        let p = AcousticParams::new(0.1, 0.0, 1.0).unwrap();
        let k = Window::centered(&g, 0.25);
        let w = wave_escape_window(&g, &p, 5.0, &k).unwrap();
        assert!((w.v_g_max - 10.0).abs() < 1e-12);
        assert!((w.t_max - 0.1 * 3.0).abs() < 1e-12);
    }

    #[test]
    fn doubling_box_doubles_horizon() {
        let p = AcousticParams::new(0.1, 0.5, 1.4).unwrap();
        let g1 = Grid::new(2, 32, 8.0).unwrap();
        let g2 = Grid::new(2, 32, 16.0).unwrap();
        let w1 = wave_escape_window(&g1, &p, 4.0, &Window::centered(&g1, 0.25)).unwrap();
        let w2 = wave_escape_window(&g2, &p, 4.0, &Window::centered(&g2, 0.25)).unwrap();
        assert!((w2.t_max / w1.t_max - 2.0).abs() < 1e-12);
    }

    #[test]
    fn capillary_speed_peaks_at_cutoff() {
        let g = Grid::new(2, 32, 8.0).unwrap();
        let p = AcousticParams::new(0.2, 1.0, 1.0).unwrap();
        let w = wave_escape_window(&g, &p, 6.0, &Window::centered(&g, 0.25)).unwrap();
        assert_eq!(w.v_g_max, p.group_velocity(6.0));
        let mut prev = 0.0;
        for i in 0..100 {
            let v = p.group_velocity(0.06 * i as f64);
            assert!(v >= prev);
            prev = v;
        }
        assert!(require_horizon(&w, 10.0).is_err());
        assert!(wave_escape_window(&g, &p, 6.0, &Window::Global).is_err());
    }
}
