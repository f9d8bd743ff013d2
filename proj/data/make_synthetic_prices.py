"""Regenerates data/hk0005_synthetic.csv.

A synthetic weekday close series over 2012-04-02 .. 2014-03-31 with heavy-tailed
daily log returns (product-of-normals noise), pinned to start at 100.00 and end
at 115.40. It stands in for an adjusted daily close series; it is not market data.
"""
import datetime as dt
import numpy as np

rng = np.random.default_rng(20120402)
start, end = dt.date(2012, 4, 2), dt.date(2014, 3, 31)
dates = []
d = start
while d <= end:
    if d.weekday() < 5:
        dates.append(d)
    d += dt.timedelta(days=1)

n = len(dates)
z = rng.standard_normal(n) * np.abs(rng.standard_normal(n))
steps = 0.012 * z
steps[0] = 0.0
logp = np.cumsum(steps)
drift = (np.log(1.154) - logp[-1]) * np.arange(n) / (n - 1)
prices = 100.0 * np.exp(logp + drift)
prices = np.round(prices, 2)
prices[0], prices[-1] = 100.00, 115.40

with open("hk0005_synthetic.csv", "w") as f:
    f.write("date,close\n")
    for day, p in zip(dates, prices):
        f.write(f"{day.isoformat()},{p:.2f}\n")
