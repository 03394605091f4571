//! The hypothesis tests used across the pipeline on small samples.

use stroke_rf::stats::{ks_normality, paired_t, shapiro_wilk, welch_t, wilcoxon_signed_rank};

fn main() -> stroke_rf::Result<()> {
    let a = [0.91, 0.93, 0.89, 0.95, 0.92, 0.90, 0.94, 0.88, 0.93, 0.91, 0.92, 0.90];
    let b = [0.87, 0.90, 0.86, 0.91, 0.88, 0.89, 0.90, 0.85, 0.90, 0.86, 0.88, 0.87];

    let sw = shapiro_wilk(&a)?;
    println!("Shapiro-Wilk     W {:.4}  p {:.4}", sw.statistic, sw.p_value);
    let ks = ks_normality(&a)?;
    println!("Lilliefors KS    D {:.4}  p {:.4}", ks.statistic, ks.p_value);
    let w = welch_t(&a, &b)?;
    println!("Welch t          t {:.3} df {:.1} p {:.2e}", w.t, w.df, w.p_two_sided);
    let p = paired_t(&a, &b)?;
    println!("paired t         t {:.3} p {:.2e}", p.t, p.p_two_sided);
    let wx = wilcoxon_signed_rank(&a, &b)?;
    println!(
        "Wilcoxon         W+ {} W- {} p {:.2e} ({:?})",
        wx.w_plus, wx.w_minus, wx.p_two_sided, wx.method
    );
    Ok(())
}
