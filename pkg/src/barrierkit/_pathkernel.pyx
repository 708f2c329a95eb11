# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled path-scan kernel.

Per-path scalar twin of _pathkernel_np.run_paths. All transcendentals
are precomputed upstream; the loop body is restricted to multiplies,
adds and comparisons so the compiled and vectorized kernels agree bit
for bit (the build disables floating-point contraction for this file).
"""


def run_paths(double x0, double drift, double vol,
              double[:, ::1] z,
              bint has_l, double[::1] bl, double[:, ::1] wl,
              bint has_u, double[::1] bu, double[:, ::1] wu,
              unsigned char[::1] status, double[::1] xfin,
              long long[::1] tie_step, double[::1] tie_x0, double[::1] tie_x1):
    cdef Py_ssize_t npaths = z.shape[0]
    cdef Py_ssize_t nsteps = z.shape[1]
    cdef Py_ssize_t p, i
    cdef double x, x1, t, d0l, d1l, d0u, d1u
    cdef bint hl, hu
    cdef unsigned char st
    with nogil:
        for p in range(npaths):
            x = x0
            st = 0
            for i in range(nsteps):
                t = drift + vol * z[p, i]
                x1 = x + t
                hl = False
                hu = False
                if has_l:
                    d0l = x - bl[i]
                    d1l = x1 - bl[i + 1]
                    hl = (d1l <= 0.0) or (d0l * d1l < wl[p, i])
                if has_u:
                    d0u = bu[i] - x
                    d1u = bu[i + 1] - x1
                    hu = (d1u <= 0.0) or (d0u * d1u < wu[p, i])
                if hl or hu:
                    if hl and hu:
                        st = 3
                        tie_step[p] = i
                        tie_x0[p] = x
                        tie_x1[p] = x1
                    elif hl:
                        st = 1
                    else:
                        st = 2
                    break
                x = x1
            status[p] = st
            xfin[p] = x
