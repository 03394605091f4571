//! Classification metrics: ROC curves, AUC with DeLong intervals, accuracy
//! and single-variable discrimination.

mod roc;

pub use roc::{
    accuracy, auc, auc_ci, auc_trapezoid, mann_whitney_auc, roc_curve, single_variable_roc,
    write_roc_csv, AucResult, ConfusionMatrix, RocCurve, RocPoint, SingleVariableRoc,
    DEFAULT_THRESHOLD,
};
