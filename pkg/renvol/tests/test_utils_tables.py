import os

from pandas import DataFrame
from pandas.testing import assert_frame_equal

from renvol.utils import tables


def test_write_read_csv(tmpdir):
    frame = DataFrame({'beta': [1.0, 2.5], 'minimizer': ['large', 'thermal']})
    filename = os.path.join(tmpdir.mkdir('tables'), 'phase.csv')

    tables.write_csv(frame, filename, {'beta': 'length'})

    with open(filename) as f:
        lines = f.read().splitlines()
    assert lines[0] == 'beta,minimizer'
    assert lines[1] == 'length,1'
    assert lines[2] == '1,large'

    assert_frame_equal(tables.read_csv(filename), frame)
