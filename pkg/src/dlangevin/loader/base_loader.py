"""
Base loader abstract class and common utilities.

Provides the foundation for the JSON parameter and experiment loaders.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, Generic, List, Mapping, Optional, Sequence, TypeVar, Union
from pathlib import Path
import json
import logging

from jsonschema import Draft7Validator

# Type variable for model types
T = TypeVar('T')


class LoaderException(Exception):
    """Base exception for loader errors."""
    pass


class FileNotFoundError(LoaderException):
    """Raised when a file cannot be found."""
    pass


class ParserError(LoaderException):
    """Raised when file parsing fails; carries the 1-based line and column."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(LoaderException):
    """Raised when data validation fails; carries every violation found."""

    def __init__(self, message: str, errors: Optional[Sequence[str]] = None):
        self.errors: List[str] = list(errors or [])
        if self.errors:
            message = f"{message}:\n" + "\n".join(f"  - {e}" for e in self.errors)
        super().__init__(message)


class ConversionError(LoaderException):
    """Raised when data conversion to model fails."""
    pass


class UnsupportedFormatError(LoaderException):
    """Raised when file format is not supported."""
    pass


class BaseLoader(ABC, Generic[T]):
    """
    Abstract base class for all file loaders.

    Implements the template pattern for loading and converting files:
    1. Load file -> raw data
    2. Validate raw data
    3. Convert to model objects

    Subclasses must implement:
    - load(): Parse file content
    - validate(): Validate parsed data
    - to_model(): Convert to model objects
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        """
        Initialize loader.

        Args:
            logger: Optional logger instance. If None, creates default logger.
        """
        self.logger = logger or logging.getLogger(self.__class__.__name__)

    def _validate_file_exists(self, file_path: Union[str, Path]) -> Path:
        """
        Check if file exists.

        Raises:
            FileNotFoundError: If file does not exist
        """
        path = Path(file_path).resolve()
        if not path.exists():
            raise FileNotFoundError(f"File not found: {path}")
        if not path.is_file():
            raise FileNotFoundError(f"Path is not a file: {path}")
        return path

    def _validate_file_extension(self, file_path: Path, extensions: List[str]) -> None:
        """
        Raises:
            UnsupportedFormatError: If extension is not valid
        """
        if file_path.suffix.lower() not in [ext.lower() for ext in extensions]:
            raise UnsupportedFormatError(
                f"Unsupported file extension: {file_path.suffix}. "
                f"Expected one of: {', '.join(extensions)}"
            )

    @abstractmethod
    def load(self, file_path: Union[str, Path]) -> Dict[str, Any]:
        """
        Load and parse file.

        Raises:
            FileNotFoundError: If file does not exist
            ParserError: If parsing fails
        """
        pass

    @abstractmethod
    def validate(self, data: Dict[str, Any]) -> bool:
        """
        Validate parsed data structure.

        Raises:
            ValidationError: If data is invalid
        """
        pass

    @abstractmethod
    def to_model(self, data: Dict[str, Any]) -> T:
        """
        Convert parsed data to model objects.

        Raises:
            ConversionError: If conversion fails
        """
        pass

    def convert(self, data: Dict[str, Any]) -> T:
        """Validate and convert an in-memory document."""
        self.validate(data)
        self.logger.debug("Data validation successful")
        return self.to_model(data)

    def load_and_convert(self, file_path: Union[str, Path]) -> T:
        """
        Load file and convert to model objects (convenience method).

        Combines load(), validate(), and to_model() in one call.

        Args:
            file_path: Path to file to load

        Returns:
            Model object(s)

        Raises:
            LoaderException: If any step fails
        """
        self.logger.info(f"Loading file: {file_path}")

        try:
            data = self.load(file_path)
            self.logger.debug(f"Loaded data with {len(data)} top-level keys")

            model = self.convert(data)
            self.logger.info("File loaded and converted successfully")

            return model

        except LoaderException:
            # Re-raise loader exceptions
            raise
        except Exception as e:
            # Wrap other exceptions
            self.logger.error(f"Unexpected error: {e}", exc_info=True)
            raise LoaderException(f"Failed to load file: {e}") from e


class JsonLoader(BaseLoader[T]):
    """
    Loader for JSON documents checked against a Draft-7 schema.

    Subclasses set `schema` and implement to_model().
    """

    schema: Mapping[str, Any] = {"type": "object"}
    extensions = [".json"]

    def load(self, file_path: Union[str, Path]) -> Dict[str, Any]:
        path = self._validate_file_exists(file_path)
        self._validate_file_extension(path, self.extensions)
        try:
            with path.open("r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ParserError(
                f"Invalid JSON in {path} at line {e.lineno}, column {e.colno}: {e.msg}",
                line=e.lineno,
                column=e.colno,
            ) from e
        if not isinstance(data, dict):
            raise ParserError(f"Top level of {path} must be a JSON object")
        return data

    def schema_errors(self, data: Any) -> List[str]:
        """Every schema violation, as 'path: message'."""
        validator = Draft7Validator(self.schema)
        errors = sorted(validator.iter_errors(data), key=lambda e: [str(p) for p in e.absolute_path])
        return [
            f"{'/'.join(str(p) for p in e.absolute_path) or '<root>'}: {e.message}"
            for e in errors
        ]

    def validate(self, data: Dict[str, Any]) -> bool:
        errors = self.schema_errors(data)
        if errors:
            raise ValidationError(f"{len(errors)} schema violation(s)", errors)
        return True
