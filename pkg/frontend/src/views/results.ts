// Results dashboard: the score table of a run, with band/score/rule
// filters, sortable columns, and per-case explanation trees and graphs.

import { ApiClient } from "../api.js";
import type { CaseScoreDoc, RunDoc } from "../models.js";
import { renderExplanationSets } from "../tree.js";

export interface ResultsFilter {
  risk: string;
  minScore: number | null;
  maxScore: number | null;
  rule: string;
}

export const EMPTY_FILTER: ResultsFilter = {
  risk: "",
  minScore: null,
  maxScore: null,
  rule: "",
};

export function scoreMatches(score: CaseScoreDoc, filter: ResultsFilter): boolean {
  if (filter.risk && score.risk !== filter.risk) return false;
  if (filter.minScore !== null && score.soft_score < filter.minScore) return false;
  if (filter.maxScore !== null && score.soft_score > filter.maxScore) return false;
  if (filter.rule && !score.activated.some((a) => a.rule_id === filter.rule)) {
    return false;
  }
  return true;
}

export type SortKey = "case_id" | "psoft_score" | "soft_score" | "risk";

export function sortScores(scores: CaseScoreDoc[], key: SortKey,
                           descending = false): CaseScoreDoc[] {
  const sorted = [...scores].sort((a, b) => {
    const av = a[key];
    const bv = b[key];
    if (av === bv) return a.case_id - b.case_id;
    return av < bv ? -1 : 1;
  });
  return descending ? sorted.reverse() : sorted;
}

export class ResultsView {
  readonly element = document.createElement("section");
  private run: RunDoc | null = null;
  private filter: ResultsFilter = { ...EMPTY_FILTER };
  private sortKey: SortKey = "case_id";
  private descending = false;
  private expanded = new Set<number>();

  constructor(private readonly api: ApiClient) {
    this.element.className = "results";
  }

  async load(runId: string): Promise<void> {
    this.run = await this.api.getRun(runId);
    this.expanded.clear();
    this.render();
  }

  showRun(run: RunDoc): void {
    this.run = run;
    this.expanded.clear();
    this.render();
  }

  setFilter(filter: Partial<ResultsFilter>): void {
    this.filter = { ...this.filter, ...filter };
    this.render();
  }

  setSort(key: SortKey): void {
    if (this.sortKey === key) {
      this.descending = !this.descending;
    } else {
      this.sortKey = key;
      this.descending = false;
    }
    this.render();
  }

  toggleCase(caseId: number): void {
    if (this.expanded.has(caseId)) {
      this.expanded.delete(caseId);
    } else {
      this.expanded.add(caseId);
    }
    this.render();
  }

  render(): void {
    this.element.replaceChildren();
    const run = this.run;
    if (!run) {
      this.element.textContent = "no run loaded";
      return;
    }

    const heading = document.createElement("h2");
    heading.textContent =
      `run ${run.run_id} — ${run.classifier_id} v${run.classifier_version} ` +
      `over ${run.dataset_id}`;
    this.element.append(heading);

    this.element.append(this.filterBar(run));

    const table = document.createElement("table");
    table.className = "scores";
    const head = document.createElement("tr");
    const columns: Array<[SortKey | null, string]> = [
      ["case_id", "case"], ["psoft_score", "psoft"], ["soft_score", "soft"],
      ["risk", "risk"], [null, "activated"],
    ];
    for (const [key, title] of columns) {
      const th = document.createElement("th");
      th.textContent = title;
      if (key) {
        th.classList.add("sortable");
        th.addEventListener("click", () => this.setSort(key));
      }
      head.append(th);
    }
    table.append(head);

    const visible = sortScores(
      run.scores.filter((s) => scoreMatches(s, this.filter)),
      this.sortKey, this.descending);
    for (const score of visible) {
      table.append(this.scoreRow(run, score));
      if (this.expanded.has(score.case_id)) {
        const row = document.createElement("tr");
        row.className = "expansion";
        const cell = document.createElement("td");
        cell.colSpan = 5;
        cell.append(renderExplanationSets(
          run.explanations[String(score.case_id)] ?? []));
        row.append(cell);
        table.append(row);
      }
    }
    this.element.append(table);

    for (const failure of run.failures) {
      const div = document.createElement("div");
      div.className = "failure";
      div.textContent = `case ${failure.case_id} failed: ${failure.error}`;
      this.element.append(div);
    }
  }

  private filterBar(run: RunDoc): HTMLElement {
    const bar = document.createElement("form");
    bar.className = "filters";
    bar.addEventListener("submit", (e) => e.preventDefault());

    const bandSelect = document.createElement("select");
    bandSelect.className = "filter-risk";
    const any = document.createElement("option");
    any.value = "";
    any.textContent = "any band";
    bandSelect.append(any);
    for (const band of [...new Set(run.scores.map((s) => s.risk))].sort()) {
      const option = document.createElement("option");
      option.value = band;
      option.textContent = band;
      option.selected = this.filter.risk === band;
      bandSelect.append(option);
    }
    bandSelect.addEventListener("change", () =>
      this.setFilter({ risk: bandSelect.value }));

    const minInput = document.createElement("input");
    minInput.className = "filter-min";
    minInput.type = "number";
    minInput.placeholder = "min score";
    minInput.addEventListener("change", () => this.setFilter({
      minScore: minInput.value === "" ? null : Number(minInput.value),
    }));
    const maxInput = document.createElement("input");
    maxInput.className = "filter-max";
    maxInput.type = "number";
    maxInput.placeholder = "max score";
    maxInput.addEventListener("change", () => this.setFilter({
      maxScore: maxInput.value === "" ? null : Number(maxInput.value),
    }));
    const ruleInput = document.createElement("input");
    ruleInput.className = "filter-rule";
    ruleInput.placeholder = "activated rule id";
    ruleInput.addEventListener("change", () =>
      this.setFilter({ rule: ruleInput.value }));

    bar.append(bandSelect, minInput, maxInput, ruleInput);
    return bar;
  }

  private scoreRow(run: RunDoc, score: CaseScoreDoc): HTMLElement {
    const row = document.createElement("tr");
    row.className = `score-row risk-${score.risk}`;
    row.dataset.caseId = String(score.case_id);
    const cells = [
      String(score.case_id),
      String(score.psoft_score),
      String(score.soft_score),
      score.risk,
      score.activated.map((a) => `${a.rule_id} [${a.weight}]`).join(", "),
    ];
    for (const text of cells) {
      const td = document.createElement("td");
      td.textContent = text;
      row.append(td);
    }
    row.addEventListener("click", () => this.toggleCase(score.case_id));
    return row;
  }
}
