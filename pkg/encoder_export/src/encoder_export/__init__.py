"""Frozen sentence-encoder export tool.

Runs a pretrained bidirectional-Transformer encoder in inference mode
over a labeled post dataset and writes one [CLS] vector per record in
the text interchange format the classification pipeline consumes.
"""

__version__ = "0.1.0"

from encoder_export.export import ExportJob, SchemaSpec, export_cls

__all__ = ["ExportJob", "SchemaSpec", "export_cls"]
