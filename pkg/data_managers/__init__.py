from .data_manager_interface import RunArchiveInterface
from .sqlite_data_manager import SQLiteDataManager
