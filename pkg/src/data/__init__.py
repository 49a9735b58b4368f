from .dataset import LabeledDataset, split_by_identity, split_query_gallery
from .formats import (
    load_dataset,
    read_embeddings,
    read_embeddings_csv,
    write_embeddings,
    write_embeddings_csv,
    write_metadata,
)
from .synthetic import SynthSpec, generate

__all__ = [
    "LabeledDataset",
    "split_by_identity",
    "split_query_gallery",
    "load_dataset",
    "read_embeddings",
    "read_embeddings_csv",
    "write_embeddings",
    "write_embeddings_csv",
    "write_metadata",
    "SynthSpec",
    "generate",
]
