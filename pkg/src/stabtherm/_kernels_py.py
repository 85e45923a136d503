"""Pure-Python Monte Carlo kernels.

Reference implementation of the compiled ``_kernels`` extension with the
same signatures and the same consumption of the uniform buffer ``rand``, so
both backends produce bit-identical chains from the same buffer. Each call
runs until ``n_records`` samples are stored or the buffer could run dry, and
returns ``(records_done, new_pos)``. ``spins`` (and ``term_val``) are
updated in place.
"""


def wolff_sample(spins, indptr, indices, edge_u, edge_v, p_add, rand, pos,
                 rec_start, n_records, interval, out_mag, out_s0, out_energy):
    s = spins.tolist()
    ptr = indptr.tolist()
    idx = indices.tolist()
    edges = list(zip(edge_u.tolist(), edge_v.tolist()))
    n = len(s)
    worst = (1 + ptr[n]) * interval
    r = rand[pos:].tolist()
    p = 0
    avail = len(r)
    stack = [0] * n
    rec = rec_start
    end = rec_start + n_records
    while rec < end and avail - p >= worst:
        for _ in range(interval):
            seed = int(r[p] * n)
            p += 1
            old = s[seed]
            s[seed] = -old
            stack[0] = seed
            top = 1
            while top:
                top -= 1
                site = stack[top]
                for j in range(ptr[site], ptr[site + 1]):
                    nb = idx[j]
                    if s[nb] == old:
                        u = r[p]
                        p += 1
                        if u < p_add:
                            s[nb] = -old
                            stack[top] = nb
                            top += 1
        out_mag[rec] = sum(s)
        out_s0[rec] = s[0]
        out_energy[rec] = -sum(s[a] * s[b] for a, b in edges)
        rec += 1
    spins[:] = s
    return rec - rec_start, pos + p


def metropolis_sample(spins, term_val, site_ptr, site_terms, accept, rand, pos,
                      rec_start, n_records, interval, out_mag, out_s0, out_energy):
    s = spins.tolist()
    tv = term_val.tolist()
    ptr = site_ptr.tolist()
    terms = site_terms.tolist()
    acc = accept.tolist()
    n = len(s)
    r = rand[pos:].tolist()
    p = 0
    avail = len(r)
    energy = -sum(tv)
    rec = rec_start
    end = rec_start + n_records
    while rec < end and avail - p >= n * interval:
        for _ in range(interval):
            for i in range(n):
                field = 0
                for j in range(ptr[i], ptr[i + 1]):
                    field += tv[terms[j]]
                # flipping spin i costs 2 * field
                u = r[p]
                p += 1
                if field <= 0 or u < acc[field]:
                    s[i] = -s[i]
                    for j in range(ptr[i], ptr[i + 1]):
                        t = terms[j]
                        tv[t] = -tv[t]
                    energy += 2 * field
        out_mag[rec] = sum(s)
        out_s0[rec] = s[0]
        out_energy[rec] = energy
        rec += 1
    spins[:] = s
    term_val[:] = tv
    return rec - rec_start, pos + p
