"""
This module contains the readers and writers of the files of the package.
"""

from defect_regression.io.dict import model_from_dict, model_to_dict

__all__ = ["model_from_dict", "model_to_dict"]
