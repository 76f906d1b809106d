//! Nelder–Mead minimiser with the standard coefficients (1, 2, 1/2, 1/2).

#[derive(Debug, Clone)]
pub(crate) struct SimplexOutcome {
    pub point: Vec<f64>,
    pub iterations: usize,
    /// False when the iteration budget ran out first.
    pub finished: bool,
}

pub(crate) struct SimplexSettings {
    pub max_iters: usize,
    /// Stop once every vertex lies within this distance of the best one.
    pub step_tol: f64,
    pub initial_step: f64,
}

/// Minimises `f`. Non-finite values are treated as `+inf`, so `f` may fail
/// softly outside its domain.
pub(crate) fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    settings: &SimplexSettings,
) -> SimplexOutcome {
    let dim = start.len();
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut verts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    verts.push(start.to_vec());
    for i in 0..dim {
        let mut v = start.to_vec();
        v[i] += settings.initial_step;
        verts.push(v);
    }
    let mut vals: Vec<f64> = verts.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    let mut finished = false;
    while iterations < settings.max_iters {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        verts = order.iter().map(|&i| verts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let size = verts[1..]
            .iter()
            .map(|v| v.iter().zip(&verts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        let spread = vals[dim] - vals[0];
        if size <= settings.step_tol || (spread <= 0.0 && size <= settings.step_tol.sqrt()) {
            finished = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|j| verts[..dim].iter().map(|v| v[j]).sum::<f64>() / dim as f64)
            .collect();
        let towards = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&verts[dim])
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let reflected = towards(1.0);
        let fr = eval(&reflected);
        if fr < vals[0] {
            let expanded = towards(2.0);
            let fe = eval(&expanded);
            if fe < fr {
                verts[dim] = expanded;
                vals[dim] = fe;
            } else {
                verts[dim] = reflected;
                vals[dim] = fr;
            }
            continue;
        }
        if fr < vals[dim - 1] {
            verts[dim] = reflected;
            vals[dim] = fr;
            continue;
        }
        let (contracted, fc) = if fr < vals[dim] {
            let c = towards(0.5);
            let fc = eval(&c);
            (c, fc)
        } else {
            let c = towards(-0.5);
            let fc = eval(&c);
            (c, fc)
        };
        if fc < vals[dim].min(fr) {
            verts[dim] = contracted;
            vals[dim] = fc;
            continue;
        }
        // Shrink towards the best vertex.
        for i in 1..=dim {
            let v: Vec<f64> = verts[0]
                .iter()
                .zip(&verts[i])
                .map(|(b, x)| b + 0.5 * (x - b))
                .collect();
            vals[i] = eval(&v);
            verts[i] = v;
        }
    }

    let best = (0..=dim)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .expect("simplex is nonempty");
    SimplexOutcome {
        point: verts[best].clone(),
        iterations,
        finished,
    }
}
