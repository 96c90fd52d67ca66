import pandas as pd
from io import BytesIO


def excel_to_bytes(df: pd.DataFrame, sheet_name: str = "Sheet1", index: bool = False):
    """Return bytes buffer of an Excel file for download."""
    return workbook_to_bytes({sheet_name: df}, index=index)


def workbook_to_bytes(sheets: dict, index: bool = False):
    """One sheet per DataFrame, in insertion order."""
    output = BytesIO()
    with pd.ExcelWriter(output, engine="openpyxl") as writer:
        for sheet_name, df in sheets.items():
            df.to_excel(writer, index=index, sheet_name=sheet_name)
    output.seek(0)
    return output


def csv_to_bytes(df: pd.DataFrame):
    """Full-precision CSV (17 significant digits) for download."""
    return df.to_csv(index=False, float_format="%.17g").encode("utf-8")
