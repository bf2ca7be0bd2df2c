// Force-field overlay: viscosity as a heatmap, forces as arrows, the
// active pole and focus marked. Values come straight from one /field
// response; this module only scales them into pixels.

import type { FieldPayload } from "./types.js";

export interface FieldViewOptions {
  width?: number;
  height?: number;
  arrowStride?: number;
  stale?: boolean;
}

export function cellValues(field: FieldPayload, ix: number, iy: number): {
  force: number[];
  viscosity: number;
} {
  const [, ny] = field.grid.shape;
  const index = ix * (ny ?? 1) + iy; // row-major, z slice 0
  return {
    force: field.force[index] ?? [0, 0, 0],
    viscosity: field.viscosity[index] ?? 0,
  };
}

export function isZeroCell(force: number[], viscosity: number): boolean {
  return viscosity === 0 && force.every((component) => component === 0);
}

export function renderFieldOverlay(field: FieldPayload,
                                   options: FieldViewOptions = {}): string {
  const width = options.width ?? 800;
  const height = options.height ?? 600;
  const [nx, ny] = field.grid.shape;
  if (!nx || !ny) {
    return `<svg class="field" viewBox="0 0 ${width} ${height}" ` +
      `xmlns="http://www.w3.org/2000/svg"></svg>`;
  }
  const min = field.grid.min;
  const max = field.grid.max;
  const cellW = width / nx;
  const cellH = height / ny;
  const toX = (ix: number) => ix * cellW;
  const toY = (iy: number) => height - (iy + 1) * cellH;

  let lamMax = 0;
  for (const lam of field.viscosity) lamMax = Math.max(lamMax, lam);

  const cells: string[] = [];
  const arrows: string[] = [];
  const stride = options.arrowStride ?? 2;
  for (let ix = 0; ix < nx; ix++) {
    for (let iy = 0; iy < ny; iy++) {
      const { force, viscosity } = cellValues(field, ix, iy);
      const zero = isZeroCell(force, viscosity);
      const opacity = lamMax > 0 ? viscosity / lamMax : 0;
      cells.push(
        `<rect class="cell${zero ? " zero" : ""}" data-ix="${ix}" data-iy="${iy}" ` +
        `x="${toX(ix).toFixed(1)}" y="${toY(iy).toFixed(1)}" ` +
        `width="${cellW.toFixed(1)}" height="${cellH.toFixed(1)}" ` +
        `fill="#e74c3c" fill-opacity="${opacity.toFixed(4)}"/>`,
      );
      const fx = force[0] ?? 0;
      const fy = force[1] ?? 0;
      if (!zero && (fx !== 0 || fy !== 0) && ix % stride === 0 && iy % stride === 0) {
        const cx = toX(ix) + cellW / 2;
        const cy = toY(iy) + cellH / 2;
        const norm = Math.hypot(fx, fy) || 1;
        const scale = Math.min(14, 2 + 12 * (Math.hypot(fx, fy) / 10)) / norm;
        arrows.push(
          `<line class="arrow" x1="${cx.toFixed(1)}" y1="${cy.toFixed(1)}" ` +
          `x2="${(cx + fx * scale).toFixed(1)}" y2="${(cy - fy * scale).toFixed(1)}" ` +
          `stroke="#2c3e50" stroke-width="1" marker-end="url(#tip)"/>`,
        );
      }
    }
  }

  const markers: string[] = [];
  const px = (value: number, axis: 0 | 1) => {
    const lo = min[axis] ?? 0;
    const hi = max[axis] ?? 1;
    const f = (value - lo) / Math.max(1e-9, hi - lo);
    return axis === 0 ? f * width : height - f * height;
  };
  if (field.pole.position) {
    const [x, y] = field.pole.position;
    const kind = field.pole.sign > 0 ? "attract" : "repel";
    markers.push(
      `<circle class="pole ${kind}" data-member-id="${field.pole.member}" ` +
      `cx="${px(x ?? 0, 0).toFixed(1)}" cy="${px(y ?? 0, 1).toFixed(1)}" r="7" ` +
      `fill="${field.pole.sign > 0 ? "#27ae60" : "#c0392b"}" stroke="white"/>`,
    );
  }
  if (field.pole.focus) {
    const [x, y] = field.pole.focus;
    markers.push(
      `<circle class="focus" cx="${px(x ?? 0, 0).toFixed(1)}" ` +
      `cy="${px(y ?? 0, 1).toFixed(1)}" r="11" fill="none" ` +
      `stroke="#e67e22" stroke-width="2" stroke-dasharray="3 2"/>`,
    );
  }

  const stale = options.stale
    ? `<text x="8" y="16" class="stale">overlay is stale: community changed</text>`
    : "";
  return `<svg class="field" viewBox="0 0 ${width} ${height}" ` +
    `xmlns="http://www.w3.org/2000/svg">` +
    `<defs><marker id="tip" markerWidth="6" markerHeight="6" refX="5" refY="3" ` +
    `orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="#2c3e50"/></marker></defs>` +
    `${cells.join("")}${arrows.join("")}${markers.join("")}${stale}</svg>`;
}
