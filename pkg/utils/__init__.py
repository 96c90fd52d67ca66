# utils/__init__.py
"""
Utility package for the renal ACO tool.
Includes file formats, run configuration and spreadsheet export helpers.
"""

from .helpers import csv_to_bytes, excel_to_bytes, workbook_to_bytes
