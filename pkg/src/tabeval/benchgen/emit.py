"""Ground-truth emission: per-page JSON files plus a manifest, round-trippable."""

from __future__ import annotations

import json
from collections import Counter
from pathlib import Path
from typing import Optional

from .assemble import LayoutConfig, PageBlock, PageGroundTruth
from .compilecheck import TableAsset


def emit_ground_truth(
    pages: list[PageGroundTruth],
    out_dir: str | Path,
    assets: Optional[dict[str, TableAsset]] = None,
) -> Path:
    """Write pages/<id>.{json,tex,pdf} plus manifest.json; returns the manifest path.

    The manifest carries page ids, per-page table ids and complexity
    counts so a run can be summarized without opening every page file.
    """
    out = Path(out_dir)
    pages_dir = out / "pages"
    pages_dir.mkdir(parents=True, exist_ok=True)
    manifest_pages = []
    complexity_counts: Counter[str] = Counter()
    for page in pages:
        tex_path = pages_dir / f"{page.page_id}.tex"
        tex_path.write_text(page.tex, encoding="utf-8")
        page.tex_path = str(tex_path.relative_to(out))
        if page.pdf_bytes:
            pdf_path = pages_dir / f"{page.page_id}.pdf"
            pdf_path.write_bytes(page.pdf_bytes)
            page.pdf_path = str(pdf_path.relative_to(out))
        page_data = {
            "page_id": page.page_id,
            "layout": page.layout.to_json_dict(),
            "blocks": [b.to_json_dict() for b in page.blocks],
            "tex_path": page.tex_path,
            "pdf_path": page.pdf_path,
        }
        (pages_dir / f"{page.page_id}.json").write_text(
            json.dumps(page_data, indent=2, ensure_ascii=False), encoding="utf-8"
        )
        if assets:
            for tid in page.table_ids:
                if tid in assets:
                    complexity_counts[assets[tid].complexity] += 1
        manifest_pages.append({"page_id": page.page_id, "table_ids": page.table_ids})

    manifest = {
        "pages": manifest_pages,
        "n_pages": len(pages),
        "n_tables": sum(len(p["table_ids"]) for p in manifest_pages),
        "complexity_counts": dict(sorted(complexity_counts.items())),
        "assets": {
            aid: {
                "latex": a.latex,
                "width_pt": a.width_pt,
                "height_pt": a.height_pt,
                "complexity": a.complexity,
                "origin": a.origin,
            }
            for aid, a in sorted((assets or {}).items())
        },
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, ensure_ascii=False), encoding="utf-8")
    return manifest_path


def load_ground_truth(manifest_path: str | Path) -> tuple[list[PageGroundTruth], dict[str, TableAsset]]:
    """Reload pages and assets; inverse of emit_ground_truth."""
    manifest_path = Path(manifest_path)
    out = manifest_path.parent
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    assets = {
        aid: TableAsset(
            asset_id=aid,
            latex=a["latex"],
            width_pt=a["width_pt"],
            height_pt=a["height_pt"],
            complexity=a["complexity"],
            origin=a.get("origin", ""),
        )
        for aid, a in manifest.get("assets", {}).items()
    }
    pages = []
    for entry in manifest["pages"]:
        page_data = json.loads((out / "pages" / f"{entry['page_id']}.json").read_text(encoding="utf-8"))
        tex_path = page_data.get("tex_path")
        pdf_path = page_data.get("pdf_path")
        page = PageGroundTruth(
            page_id=page_data["page_id"],
            layout=LayoutConfig.from_json_dict(page_data["layout"]),
            blocks=[PageBlock.from_json_dict(b) for b in page_data["blocks"]],
            tex=(out / tex_path).read_text(encoding="utf-8") if tex_path else "",
            pdf_bytes=(out / pdf_path).read_bytes() if pdf_path else None,
            tex_path=tex_path,
            pdf_path=pdf_path,
        )
        pages.append(page)
    return pages, assets
