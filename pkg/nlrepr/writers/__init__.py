from .base import WriterBase
from .files import FilesWriter
from .stdout import StdoutWriter

__all__ = ["FilesWriter", "StdoutWriter", "WriterBase"]
