// Top-down member map as an SVG string. Glyph shape encodes gender,
// fill color the grade; after a query the top-3 advisers get the bright
// variant of their color plus a halo, everyone else is dimmed.

import type { GraphEdge, MemberProfile } from "./types.js";

export interface MapOptions {
  bounds?: { min: number[]; max: number[] };
  top3?: number[];
  paths?: number[][];
  trustEdges?: GraphEdge[];
  selected?: number | null;
  width?: number;
  height?: number;
}

const GRADE_COLORS = ["#7f8c8d", "#2980b9", "#27ae60", "#d35400", "#8e44ad", "#c0392b"];
const GRADE_BRIGHT = ["#bdc3c7", "#5dade2", "#58d68d", "#f39c12", "#bb8fce", "#ec7063"];

export function gradeColor(grade: number, bright: boolean): string {
  const palette = bright ? GRADE_BRIGHT : GRADE_COLORS;
  const index = Math.abs(grade) % palette.length;
  return palette[index] ?? "#7f8c8d";
}

export function memberPosition(member: MemberProfile): number[] {
  return member.current_location ?? member.permanent_location;
}

function glyph(member: MemberProfile, x: number, y: number, bright: boolean,
               dimmed: boolean, selected: boolean): string {
  const fill = gradeColor(member.grade, bright);
  const classes = ["member"];
  if (bright) classes.push("top3");
  if (dimmed) classes.push("dim");
  if (selected) classes.push("selected");
  const common =
    `class="${classes.join(" ")}" data-member-id="${member.member_id}" ` +
    `fill="${fill}" opacity="${dimmed ? 0.45 : 1}"`;
  const halo = bright
    ? `<circle cx="${x}" cy="${y}" r="14" class="halo" fill="none" ` +
      `stroke="${fill}" stroke-width="2" opacity="0.6"/>`
    : "";
  let shape: string;
  if (member.gender === "F") {
    shape = `<circle cx="${x}" cy="${y}" r="8" ${common}/>`;
  } else if (member.gender === "M") {
    const points = `${x},${y - 9} ${x - 8},${y + 7} ${x + 8},${y + 7}`;
    shape = `<polygon points="${points}" ${common}/>`;
  } else {
    shape = `<rect x="${x - 7}" y="${y - 7}" width="14" height="14" ${common}/>`;
  }
  return halo + shape +
    `<text x="${x}" y="${y + 20}" class="label" text-anchor="middle">` +
    `${member.member_id}</text>`;
}

export function renderMap(members: MemberProfile[], options: MapOptions = {}): string {
  const width = options.width ?? 800;
  const height = options.height ?? 600;
  if (members.length === 0) {
    return `<svg class="map" viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg">` +
      `<text x="${width / 2}" y="${height / 2}" text-anchor="middle" class="hint">` +
      `no members in this community yet</text></svg>`;
  }
  const min = options.bounds?.min ?? [0, 0, 0];
  const max = options.bounds?.max ?? [20, 15, 3];
  const margin = 30;
  const sx = (width - 2 * margin) / Math.max(1e-9, (max[0] ?? 1) - (min[0] ?? 0));
  const sy = (height - 2 * margin) / Math.max(1e-9, (max[1] ?? 1) - (min[1] ?? 0));
  const toX = (x: number) => margin + (x - (min[0] ?? 0)) * sx;
  const toY = (y: number) => height - margin - (y - (min[1] ?? 0)) * sy;

  const byId = new Map(members.map((m) => [m.member_id, m]));
  const top3 = new Set(options.top3 ?? []);
  const haveQuery = top3.size > 0;
  const parts: string[] = [];

  for (const edge of options.trustEdges ?? []) {
    const a = byId.get(edge.a);
    const b = byId.get(edge.b);
    if (!a || !b) continue;
    const [ax, ay] = memberPosition(a);
    const [bx, by] = memberPosition(b);
    parts.push(
      `<line class="trust-edge" x1="${toX(ax ?? 0)}" y1="${toY(ay ?? 0)}" ` +
      `x2="${toX(bx ?? 0)}" y2="${toY(by ?? 0)}" stroke="#16a085" ` +
      `stroke-opacity="${edge.trust}" stroke-width="1.5"/>`,
    );
  }

  for (const path of options.paths ?? []) {
    const points = path
      .map((id) => byId.get(id))
      .filter((m): m is MemberProfile => m !== undefined)
      .map((m) => {
        const [x, y] = memberPosition(m);
        return `${toX(x ?? 0)},${toY(y ?? 0)}`;
      })
      .join(" ");
    parts.push(
      `<polyline class="query-path" points="${points}" fill="none" ` +
      `stroke="#f1c40f" stroke-width="1" stroke-opacity="0.7"/>`,
    );
  }

  for (const member of members) {
    const [x, y] = memberPosition(member);
    const bright = top3.has(member.member_id);
    parts.push(glyph(
      member, toX(x ?? 0), toY(y ?? 0), bright,
      haveQuery && !bright, options.selected === member.member_id,
    ));
  }

  return `<svg class="map" viewBox="0 0 ${width} ${height}" ` +
    `xmlns="http://www.w3.org/2000/svg">${parts.join("")}</svg>`;
}

export function renderProfileCard(detail: {
  member: MemberProfile;
  friendliness: number;
  socializability: number;
}): string {
  const m = detail.member;
  const channels = m.available_channels.join(", ") || "none";
  const languages = m.languages.join(", ");
  return `<div class="profile-card" data-member-id="${m.member_id}">` +
    `<h3>${m.name}</h3>` +
    `<dl>` +
    `<dt>gender</dt><dd>${m.gender}</dd>` +
    `<dt>grade</dt><dd>${m.grade}</dd>` +
    `<dt>reachable</dt><dd>${m.reachable ? "yes" : "no"}</dd>` +
    `<dt>channels</dt><dd>${channels}</dd>` +
    `<dt>languages</dt><dd>${languages}</dd>` +
    `<dt>friendliness</dt><dd>${detail.friendliness}</dd>` +
    `<dt>socializability</dt><dd>${detail.socializability}</dd>` +
    `</dl></div>`;
}
