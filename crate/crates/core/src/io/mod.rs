//! File formats.

pub mod cloud_csv;
pub mod cube_file;
pub mod metrics_csv;
pub mod text;

pub use cloud_csv::{read_cloud, read_cloud_from, write_cloud, write_cloud_to};
pub use cube_file::{decode_cube, encode_cube, read_cube, write_cube, CubeFileHeader};
pub use metrics_csv::{read_metrics, read_metrics_from, write_metrics, write_metrics_to};
pub use text::{
    parse_network, parse_processing_params, parse_radar_config, parse_scene, read_extrinsics,
    read_network, read_processing_params, read_radar_config, read_scene, write_network,
    write_scene,
};
