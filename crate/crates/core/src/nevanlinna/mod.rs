pub mod locate;

pub use locate::{
    winding_closed_debug,
    circle_winding, locate_apoints, APoint, APointList, LocateParams, NevError, Target,
};
