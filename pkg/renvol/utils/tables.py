"""
Table operations.

write_csv,
read_csv

CSV files carry two header rows: the column names and their units.
"""
from __future__ import annotations

from pathlib import Path

from pandas import DataFrame
from pandas import read_csv as _read_csv

from renvol.utils.log import logger


def write_csv(
    frame: DataFrame,
    filename: str | Path,
    units: dict,
    separator: str = ','
):
    """
    Writes a table with a units row below the column names.

    Parameters
    ----------
    frame : DataFrame
        The table
    filename : str or Path
        Destination file
    units : dict
        Unit label per column; missing columns get '1'
    separator : str, optional
        Field separator, by default ','
    """
    header = DataFrame([{c: units.get(c, '1') for c in frame.columns}])
    logger.debug(f'...writing {len(frame)} rows to {filename}')
    with open(filename, 'w', newline='') as f:
        f.write(separator.join(frame.columns) + '\n')
        header.to_csv(f, sep=separator, header=False, index=False)
        frame.to_csv(f, sep=separator, header=False, index=False, float_format='%.15g')


def read_csv(filename: str | Path, separator: str = ',', **kwargs) -> DataFrame:
    """
    Reads a table written by write_csv, dropping the units row.

    Parameters
    ----------
    filename : str or Path
        Source file
    separator : str, optional
        Field separator, by default ','
    **kwargs : Pandas read_csv arguments
        https://pandas.pydata.org/docs/reference/api/pandas.read_csv.html

    Returns
    -------
    DataFrame
        The table
    """
    return _read_csv(filename, sep=separator, skiprows=[1], **kwargs)
