from .config import (
    get_parallel_number as get_parallel_number,
    set_log_level as set_log_level,
)
