from numba import njit

from . import _loops

tw_dp = njit(cache=True)(_loops.tw_dp)
pw_dp = njit(cache=True)(_loops.pw_dp)
canon = njit(cache=True)(_loops.canon)
nested_counts = njit(cache=True)(_loops.nested_counts)
