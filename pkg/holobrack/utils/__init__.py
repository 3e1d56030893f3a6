from .export import normalize, to_json_bytes, format_csv, write_json, write_csv

__all__ = ["normalize", "to_json_bytes", "format_csv", "write_json", "write_csv"]
