"""Built-in matrices: the displayed 5x5 line-bundle matrix, the special charge-2
instanton monad and the 10x10 skew-symmetric pencil of constant rank 8."""

# 5x5 pencil on P^2; each entry is (coefficient, variable) pairs
_X = lambda i, c=1: ((c, i),)
_0 = ()

WESTWICK_2_2_DISPLAY = (
    (_X(1, -1), _X(2, -1), _0, _0, _0),
    (_X(0), _X(1, -1), _X(2, -1), _0, _0),
    (_0, _X(0), _0, _X(2, -1), _0),
    (_0, _0, _X(0), _X(1), _X(2, -1)),
    (_0, _0, _0, _X(0), _X(1)),
)

INSTANTON_F = (
    (_0, _X(1)),
    (_X(1), _X(0)),
    (_X(0), _0),
    (_0, _X(3, -1)),
    (_X(3, -1), _X(2, -1)),
    (_X(2, -1), _0),
)

INSTANTON_G = (
    (_X(2), _X(3), _0, _X(0), _X(1), _0),
    (_0, _X(2), _X(3), _0, _X(0), _X(1)),
)

# upper triangles (diagonal included) of A_0..A_3
SKEW_10_UPPER = (
    (
        ('0', '108', '594', '54', '36', '876', '108', '18', '0', '0'),
        ('0', '0', '0', '-18', '192', '0', '-36', '0', '0'),
        ('0', '0', '36', '192', '0', '18', '0', '0'),
        ('0', '0', '0', '0', '0', '0', '0'),
        ('0', '18', '18', '0', '0', '0'),
        ('0', '-48', '-36', '0', '0'),
        ('0', '-36', '0', '0'),
        ('0', '0', '0'),
        ('0', '0'),
        ('0',),
    ),
    (
        ('0', '-324', '162', '0', '-64', '-492', '-324', '-193/4', '0', '0'),
        ('0', '0', '0', '-16', '48', '0', '-41/2', '0', '0'),
        ('0', '0', '-16', '264', '0', '-163/4', '0', '0'),
        ('0', '0', '24', '0', '-9/4', '0', '0'),
        ('0', '16', '4', '0', '0', '0'),
        ('0', '-48', '-89/2', '0', '0'),
        ('0', '-17/2', '0', '0'),
        ('0', '27/2', '0'),
        ('0', '0'),
        ('0',),
    ),
    (
        ('0', '-438', '-534', '-108', '-36', '-1590', '-495/2', '-36', '-324', '54'),
        ('0', '300', '0', '18', '0', '-75', '18', '0', '0'),
        ('0', '-54', '-36', '-876', '-705/2', '-36', '0', '0'),
        ('0', '0', '0', '-27/2', '0', '0', '0'),
        ('0', '-18', '-18', '0', '0', '0'),
        ('0', '-219', '18', '0', '0'),
        ('0', '18', '81', '0'),
        ('0', '0', '0'),
        ('0', '0'),
        ('0',),
    ),
    (
        ('0', '-498', '978', '319/4', '64', '1058/3', '-438', '64', '0', '0'),
        ('0', '612', '23/2', '16', '368/3', '-48', '16', '0', '0'),
        ('0', '-35/4', '16', '-2116/3', '-444', '16', '0', '0'),
        ('0', '0', '-23/2', '1/2', '0', '27/2', '0'),
        ('0', '-16', '-4', '0', '0', '0'),
        ('0', '-128/3', '16', '144', '-24'),
        ('0', '4', '0', '0'),
        ('0', '0', '0'),
        ('0', '0'),
        ('0',),
    ),
)


def entries_to_rows(display, n):
    """Coefficient-list rows for pencil_from_rows."""
    out = []
    for row in display:
        r = []
        for entry in row:
            c = [0] * (n + 1)
            for coef, var in entry:
                c[var] += coef
            r.append(c)
        out.append(r)
    return out
