import glob
import importlib.util
import os
import sys

# ctest points this at the package assembled in the build tree, which must win
# over any installed or editable copy (whose import hooks ignore PYTHONPATH).
_tree = os.environ.get("TROPASYM_BUILD_TREE")
if _tree:
    _pkg = os.path.join(_tree, "tropasym")
    (_so,) = glob.glob(os.path.join(_pkg, "_core.*"))
    _core_spec = importlib.util.spec_from_file_location("tropasym._core", _so)
    _core = importlib.util.module_from_spec(_core_spec)
    _core_spec.loader.exec_module(_core)
    sys.modules["tropasym._core"] = _core

    _spec = importlib.util.spec_from_file_location(
        "tropasym", os.path.join(_pkg, "__init__.py"), submodule_search_locations=[_pkg]
    )
    _module = importlib.util.module_from_spec(_spec)
    sys.modules["tropasym"] = _module
    _spec.loader.exec_module(_module)
    assert _module._core is _core
