try:
    from renvol import *  # noqa

    _top_import_error = None
except Exception as e:
    _top_import_error = e


def test_import_renvol():
    assert _top_import_error is None


def test_version():
    import renvol

    assert renvol.__version__ == '1.0.0'
