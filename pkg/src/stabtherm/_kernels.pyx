# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernels; see ``_kernels_py`` for the contract."""

import numpy as np

cimport numpy as cnp


def wolff_sample(signed char[::1] spins, int[::1] indptr, int[::1] indices,
                 int[::1] edge_u, int[::1] edge_v, double p_add,
                 const double[::1] rand, Py_ssize_t pos,
                 Py_ssize_t rec_start, Py_ssize_t n_records, Py_ssize_t interval,
                 long long[::1] out_mag, signed char[::1] out_s0,
                 long long[::1] out_energy):
    cdef Py_ssize_t n = spins.shape[0]
    cdef Py_ssize_t n_edges = edge_u.shape[0]
    cdef Py_ssize_t worst = (1 + indptr[n]) * interval
    cdef Py_ssize_t n_rand = rand.shape[0]
    cdef int[::1] stack = np.empty(max(n, 1), dtype=np.intc)
    cdef Py_ssize_t rec = rec_start, end = rec_start + n_records
    cdef Py_ssize_t it, top, site, j, i
    cdef int seed, nb
    cdef signed char old
    cdef long long mag, e
    while rec < end and n_rand - pos >= worst:
        for it in range(interval):
            seed = <int>(rand[pos] * n)
            pos += 1
            old = spins[seed]
            spins[seed] = -old
            stack[0] = seed
            top = 1
            while top:
                top -= 1
                site = stack[top]
                for j in range(indptr[site], indptr[site + 1]):
                    nb = indices[j]
                    if spins[nb] == old:
                        if rand[pos] < p_add:
                            spins[nb] = -old
                            stack[top] = nb
                            top += 1
                        pos += 1
        mag = 0
        for i in range(n):
            mag += spins[i]
        e = 0
        for i in range(n_edges):
            e -= spins[edge_u[i]] * spins[edge_v[i]]
        out_mag[rec] = mag
        out_s0[rec] = spins[0]
        out_energy[rec] = e
        rec += 1
    return rec - rec_start, pos


def metropolis_sample(signed char[::1] spins, signed char[::1] term_val,
                      int[::1] site_ptr, int[::1] site_terms,
                      const double[::1] accept, const double[::1] rand,
                      Py_ssize_t pos, Py_ssize_t rec_start, Py_ssize_t n_records,
                      Py_ssize_t interval, long long[::1] out_mag,
                      signed char[::1] out_s0, long long[::1] out_energy):
    cdef Py_ssize_t n = spins.shape[0]
    cdef Py_ssize_t n_rand = rand.shape[0]
    cdef Py_ssize_t rec = rec_start, end = rec_start + n_records
    cdef Py_ssize_t it, i, j, t
    cdef long long energy = 0, mag
    cdef int field
    cdef double u
    for t in range(term_val.shape[0]):
        energy -= term_val[t]
    while rec < end and n_rand - pos >= n * interval:
        for it in range(interval):
            for i in range(n):
                field = 0
                for j in range(site_ptr[i], site_ptr[i + 1]):
                    field += term_val[site_terms[j]]
                u = rand[pos]
                pos += 1
                if field <= 0 or u < accept[field]:
                    spins[i] = -spins[i]
                    for j in range(site_ptr[i], site_ptr[i + 1]):
                        t = site_terms[j]
                        term_val[t] = -term_val[t]
                    energy += 2 * field
        mag = 0
        for i in range(n):
            mag += spins[i]
        out_mag[rec] = mag
        out_s0[rec] = spins[0]
        out_energy[rec] = energy
        rec += 1
    return rec - rec_start, pos
