// Query panel: category buttons, urgency picker, and the ranked adviser
// table with per-response provenance (responder, weight, rate sign).

import type { Category, MemberProfile, Recommendation } from "./types.js";
import type { Urgency } from "./state.js";

export function renderCategoryButtons(categories: Category[],
                                      selected: string | null): string {
  const buttons = categories
    .map((c) => {
      const active = c.category_id === selected ? " active" : "";
      return `<button class="category${active}" data-category="${c.category_id}">` +
        `${c.label}</button>`;
    })
    .join("");
  return `<div class="category-panel">${buttons}</div>`;
}

export function renderUrgencyPicker(urgency: Urgency): string {
  const levels: Urgency[] = ["immediate", "today", "whenever"];
  const options = levels
    .map((u) => `<option value="${u}"${u === urgency ? " selected" : ""}>${u}</option>`)
    .join("");
  return `<label class="urgency">urgency <select id="urgency">${options}</select></label>`;
}

// self-description form for users who are not community members; the
// engine picks the most similar member as their proxy agent
export function renderProxyForm(enabled: boolean): string {
  return `<details class="proxy"${enabled ? " open" : ""}>` +
    `<summary>ask as a visitor (proxy)</summary>` +
    `<label>use proxy <input type="checkbox" id="proxy-enabled"` +
    `${enabled ? " checked" : ""}/></label>` +
    `<label>gender <select id="proxy-gender">` +
    `<option value=""></option><option value="F">F</option>` +
    `<option value="M">M</option>` +
    `<option value="unspecified">unspecified</option></select></label>` +
    `<label>grade <input type="number" id="proxy-grade" min="0" max="9"/></label>` +
    `<label>languages <input type="text" id="proxy-languages" ` +
    `placeholder="en, ja"/></label>` +
    `</details>`;
}

function rateSign(rate: number): string {
  return rate > 0 ? "+" : "−";
}

export function renderResults(recommendation: Recommendation | null,
                              members: Map<number, MemberProfile>): string {
  if (recommendation === null) {
    return `<div class="results empty">pick a category to ask the community</div>`;
  }
  if (recommendation.ranked.length === 0) {
    return `<div class="results empty">no feasible adviser for this request</div>`;
  }
  const top3 = new Set(recommendation.top3);
  const rows = recommendation.ranked
    .map((entry, index) => {
      const name = members.get(entry.member_id)?.name ?? `member ${entry.member_id}`;
      const sources = entry.sources
        .map((s) =>
          `<span class="source" title="path ${s.path.join(" → ")}">` +
          `${rateSign(s.rate)} from ${s.responder} ` +
          `(w ${s.weight.toFixed(4)}, trust ${s.path_trust.toFixed(4)})</span>`)
        .join(" ");
      const classes = top3.has(entry.member_id) ? "adviser top3" : "adviser";
      return `<tr class="${classes}" data-member-id="${entry.member_id}">` +
        `<td>${index + 1}</td><td>${name}</td>` +
        `<td>${entry.score.toFixed(4)}</td><td>${sources}</td>` +
        `<td><button class="rate-up" data-subject="${entry.member_id}">+1</button>` +
        `<button class="rate-down" data-subject="${entry.member_id}">−1</button></td></tr>`;
    })
    .join("");
  return `<table class="results"><thead><tr>` +
    `<th>rank</th><th>adviser</th><th>score</th><th>responses</th><th>rate</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`;
}
