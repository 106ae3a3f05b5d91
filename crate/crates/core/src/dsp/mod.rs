//! Radar signal processing from data cube to point cloud.

pub mod angle;
pub mod cfar;
pub mod ddma;
pub mod peak;
pub mod pipeline;
pub mod spectrum;
pub mod window;

pub use angle::{angle_spectrum, estimate_angle, AngleEstimate};
pub use cfar::{cfar_detect, CfarCell, CfarParams};
pub use ddma::{ddma_demux, Demuxed};
pub use peak::interpolate_peak;
pub use pipeline::{process_frame, Detection, FrameOutput, FrameProcessor, ProcessingParams};
pub use spectrum::{
    range_doppler, signed_bin, spectrum, PowerMap, RangeDopplerMap, RangeDopplerProcessor,
};
pub use window::Window;
