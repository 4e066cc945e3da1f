from defect_regression.utils.log import set_logging_config
from defect_regression.utils.mixins import JsonMixin

__all__ = ["JsonMixin", "set_logging_config"]
