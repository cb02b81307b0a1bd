//! Generation-by-generation Fuzzy GrowCut on a 5×5 grid: bright block in the
//! corner, two seeds on it and one on the background, α = 4.

use growcut::fuzzy::{fit_model, fuzzy_step, init_fuzzy, FuzzyGrowCutConfig};
use growcut::{CellGrid, GrayImage, Label, Seed, SeedSet};

fn show(grid: &CellGrid) {
    for y in 0..grid.height() {
        let row: Vec<String> = (0..grid.width())
            .map(|x| {
                let c = grid.get(x, y);
                let l = match c.label {
                    Label::Foreground => 'F',
                    Label::Background => 'B',
                    Label::Unlabeled => '.',
                };
                format!("{l}{:.2}", c.strength)
            })
            .collect();
        println!("  {}", row.join(" "));
    }
}

fn main() -> growcut::Result<()> {
    let img = GrayImage::from_fn(5, 5, |x, y| if x < 3 && y < 3 { 255 } else { 128 })?;
    let seeds = SeedSet::new([Seed::fg(1, 0), Seed::fg(0, 1), Seed::fg(3, 3)])?;
    let cfg = FuzzyGrowCutConfig {
        alpha: 4.0,
        ..Default::default()
    };
    let model = fit_model(&seeds, &cfg)?;
    println!("model {model:?}");
    println!("mu_obj:");
    for y in 0..5 {
        let row: Vec<String> = (0..5).map(|x| format!("{:.3}", model.mu_obj(x as f64, y as f64))).collect();
        println!("  {}", row.join(" "));
    }
    let mut grid = init_fuzzy(&img, &seeds, &model)?;
    println!("generation 0:");
    show(&grid);
    for gen in 1.. {
        let (next, stats) = fuzzy_step(&img, &grid, &model, &cfg)?;
        println!("generation {gen}: {} cells changed", stats.updated);
        show(&next);
        grid = next;
        if stats.updated == 0 {
            break;
        }
    }
    Ok(())
}
