from .ssg_config import SSGConfig
