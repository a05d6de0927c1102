"""Optional PNG rendering of the plot-ready tables (``--plots``).

Uses the Agg backend and strips the PNG metadata so reruns are
byte-identical.
"""

from __future__ import annotations

from pathlib import Path

__all__ = ["render_tables"]


def render_tables(out_dir: Path, tables: dict) -> list[str]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []
    for name, table in sorted(tables.items()):
        if not table.plot or not table.rows:
            continue
        x, y, group = table.plot
        ix, iy = table.columns.index(x), table.columns.index(y)
        ig = table.columns.index(group) if group else None
        series: dict = {}
        for row in table.rows:
            series.setdefault(row[ig] if ig is not None else y, []).append((float(row[ix]), float(row[iy])))
        fig, ax = plt.subplots(figsize=(6, 4))
        for key, pts in series.items():
            pts.sort()
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker=".", label=str(key))
        ax.set_xlabel(x)
        ax.set_ylabel(y)
        if len(series) > 1:
            ax.legend(fontsize="small")
        fig.tight_layout()
        target = out_dir / (Path(name).stem + ".png")
        fig.savefig(target, metadata={"Software": None})
        plt.close(fig)
        written.append(target.name)
    return written
