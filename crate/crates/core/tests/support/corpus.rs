use std::path::{Path, PathBuf};

use dsdl_core::pipeline::PipelineOptions;
use dsdl_core::resolve::LibraryEnvironment;

/// Resolves from either crate of the workspace.
pub const CORPUS_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus");

/// Dataset files and the sample count each must yield.
pub const DATASETS: &[(&str, usize)] = &[
    ("get-started/get-started.json", 2),
    ("get-started/get-started.yaml", 2),
    ("optional-label/optional-label.yaml", 4),
    ("external-files/external-files.yaml", 4),
    ("library-import/imageclass-import.yaml", 2),
    ("library-import/visualrecog-import.yaml", 2),
    ("examples/image-classification.yaml", 3),
    ("examples/object-detection.yaml", 2),
    ("examples/scene-and-object.yaml", 2),
    ("examples/image-segmentation.yaml", 3),
    ("cifar10/set-train/train.yaml", 2),
    ("voc/train.yaml", 2),
    ("segmentation/semantic.yaml", 2),
    ("segmentation/instance-map.yaml", 1),
    ("segmentation/instance-polygon.yaml", 1),
    ("segmentation/panoptic-map.yaml", 1),
    ("segmentation/panoptic-polygon.yaml", 1),
    ("coco-keypoints/set-train/keypoint-coco2017.yaml", 1),
    ("trackingnet/set-train/train.yaml", 1),
    ("dota/set-train/train.yaml", 1),
    ("synthtext/set-train/train.yaml", 1),
    ("facade-paired/set-train/train.yaml", 1),
    ("facade-unpaired/set-train/train.yaml", 2),
    ("rotated-degree/rotated-degree.yaml", 2),
];

pub fn corpus(rel: &str) -> PathBuf {
    Path::new(CORPUS_DIR).join(rel)
}

/// Bundled library only; ignores the caller's environment.
pub fn options() -> PipelineOptions {
    PipelineOptions {
        library: LibraryEnvironment::standard(None, &[]),
        ..Default::default()
    }
}
