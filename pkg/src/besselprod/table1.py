"""Published comparison table: mode triple, numerical integral, approximation.

Values are q = 1 zeros with order-0 factors, as printed (4 significant figures).
"""

from __future__ import annotations

from dataclasses import dataclass

_RAW = """\
44 23 63 4.557E-05 3.140E-05
20 20 20 9.061E-05 8.071E-05
22 22 22 7.508E-05 6.689E-05
25 25 30 5.265E-05 4.659E-05
30 30 30 4.065E-05 3.627E-05
22 89 31 -7.053E-10 9.828E-06
40 45 50 1.866E-05 1.787E-05
37 77 57 1.590E-05 1.408E-05
47 61 87 1.162E-05 1.032E-05
29 47 57 2.342E-05 2.158E-05
40 40 40 2.297E-05 2.053E-05
50 50 50 1.474E-05 1.320E-05
60 60 60 1.025E-05 9.195E-06
70 70 70 7.543E-06 6.770E-06
80 80 80 5.781E-06 5.195E-06
90 90 90 4.571E-06 4.112E-06
100 100 100 3.704E-06 3.335E-06
105 85 97 4.139E-06 3.899E-06
100 50 20 -1.114E-09 7.515E-06
120 120 120 2.575E-06 2.321E-06
130 130 130 2.195E-06 1.980E-06
140 140 140 1.893E-06 1.708E-06
150 150 150 1.649E-06 1.489E-06
160 160 160 1.450E-06 1.310E-06
160 80 70 -1.052E-08 2.131E-06
170 170 170 1.285E-06 1.161E-06
200 200 185 9.807E-07 9.184E-07
200 200 200 9.286E-07 8.401E-07
200 100 185 1.749E-06 1.582E-06
"""


@dataclass(frozen=True)
class Table1Row:
    m: int
    n: int
    p: int
    lhs: float
    rhs: float

    @property
    def mnp(self):
        return (self.m, self.n, self.p)

    @property
    def triangle_violating(self) -> bool:
        a, b, c = sorted(self.mnp)
        return c > a + b


ROWS = tuple(
    Table1Row(int(m), int(n), int(p), float(lhs), float(rhs))
    for m, n, p, lhs, rhs in (line.split() for line in _RAW.splitlines())
)
