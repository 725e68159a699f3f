# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled trial-counting kernels.

Same contract and expression order as ``_kernels_py``; one pass over each
trial without intermediate arrays, GIL released.
"""

SCHEME_SRS = 0
SCHEME_TRS = 1
SCHEME_RRS_SRS = 2
SCHEME_RRS_TRS = 3
SCHEME_OMA = 4


def count_outage_trials(
    int scheme,
    double[:, ::1] x,
    double[:, ::1] y1,
    double[:, ::1] y2,
    double[:, ::1] gli,
    long long[::1] pick,
    double rho,
    double a1,
    double a2,
    double varpi,
    double gamma1,
    double gamma2,
):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t k = x.shape[1]
    cdef Py_ssize_t t, i, j
    cdef long long count = 0
    cdef double rv = rho * varpi
    cdef double xv, y1v, y2v, srel2, srel1, sd12, sd11, sd22
    cdef double wmin, best, s, rx, m1, m2, m

    with nogil:
        if scheme == 0:  # SRS
            for t in range(n):
                best = -1.0
                for i in range(k):
                    xv = x[t, i]
                    y1v = y1[t, i]
                    y2v = y2[t, i]
                    srel2 = rho * xv * a2 / (rho * xv * a1 + rv * gli[t, i] + 1.0)
                    sd12 = rho * y1v * a2 / (rho * y1v * a1 + 1.0)
                    sd22 = rho * y2v * a2 / (rho * y2v * a1 + 1.0)
                    wmin = srel2
                    if sd12 < wmin:
                        wmin = sd12
                    if sd22 < wmin:
                        wmin = sd22
                    if wmin > best:
                        best = wmin
                if best < gamma2:
                    count += 1
        elif scheme == 1:  # TRS
            for t in range(n):
                best = -1.0
                for i in range(k):
                    xv = x[t, i]
                    y1v = y1[t, i]
                    y2v = y2[t, i]
                    srel2 = rho * xv * a2 / (rho * xv * a1 + rv * gli[t, i] + 1.0)
                    sd12 = rho * y1v * a2 / (rho * y1v * a1 + 1.0)
                    sd22 = rho * y2v * a2 / (rho * y2v * a1 + 1.0)
                    if srel2 >= gamma2 and sd12 >= gamma2 and sd22 >= gamma2:
                        srel1 = rho * xv * a1 / (rv * gli[t, i] + 1.0)
                        sd11 = rho * y1v * a1
                        s = srel1
                        if sd11 < s:
                            s = sd11
                        if s > best:
                            best = s
                if best < gamma1:
                    count += 1
        elif scheme == 2:  # RRS over SRS
            for t in range(n):
                j = <Py_ssize_t> pick[t]
                xv = x[t, j]
                y1v = y1[t, j]
                y2v = y2[t, j]
                srel2 = rho * xv * a2 / (rho * xv * a1 + rv * gli[t, j] + 1.0)
                sd12 = rho * y1v * a2 / (rho * y1v * a1 + 1.0)
                sd22 = rho * y2v * a2 / (rho * y2v * a1 + 1.0)
                wmin = srel2
                if sd12 < wmin:
                    wmin = sd12
                if sd22 < wmin:
                    wmin = sd22
                if wmin < gamma2:
                    count += 1
        elif scheme == 3:  # RRS over TRS
            for t in range(n):
                j = <Py_ssize_t> pick[t]
                xv = x[t, j]
                y1v = y1[t, j]
                y2v = y2[t, j]
                srel2 = rho * xv * a2 / (rho * xv * a1 + rv * gli[t, j] + 1.0)
                sd12 = rho * y1v * a2 / (rho * y1v * a1 + 1.0)
                sd22 = rho * y2v * a2 / (rho * y2v * a1 + 1.0)
                if srel2 >= gamma2 and sd12 >= gamma2 and sd22 >= gamma2:
                    srel1 = rho * xv * a1 / (rv * gli[t, j] + 1.0)
                    sd11 = rho * y1v * a1
                    s = srel1
                    if sd11 < s:
                        s = sd11
                    if s < gamma1:
                        count += 1
                else:
                    count += 1
        elif scheme == 4:  # OMA
            for t in range(n):
                best = -1.0
                for i in range(k):
                    rx = rho * x[t, i]
                    m1 = rho * y1[t, i]
                    if rx < m1:
                        m1 = rx
                    m1 = m1 / gamma1
                    m2 = rho * y2[t, i]
                    if rx < m2:
                        m2 = rx
                    m2 = m2 / gamma2
                    m = m1
                    if m2 < m:
                        m = m2
                    if m > best:
                        best = m
                if best < 1.0:
                    count += 1
        else:
            with gil:
                raise ValueError(f"unknown scheme code {scheme}")

    return int(count)
