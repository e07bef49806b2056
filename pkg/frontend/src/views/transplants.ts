// Transplant-case browser: paginated records grouped by donor / recipient /
// surgery attributes, with on-demand single-case classifier application.

import { ApiClient } from "../api.js";
import type { RecordDoc, SchemaDoc } from "../models.js";
import { renderExplanationSets } from "../tree.js";

export const PAGE_SIZE = 10;

export function formatValue(value: number | boolean | string | undefined): string {
  if (value === undefined) return "-";
  if (typeof value === "boolean") return value ? "true" : "false";
  return String(value);
}

export function pageOf<T>(items: T[], page: number, size = PAGE_SIZE): T[] {
  return items.slice(page * size, (page + 1) * size);
}

export class TransplantsView {
  readonly element = document.createElement("section");
  private records: RecordDoc[] = [];
  private schema: SchemaDoc = { attributes: [] };
  private datasetId = "";
  private classifierIds: string[] = [];
  private selectedClassifier = "";
  private page = 0;

  constructor(private readonly api: ApiClient) {
    this.element.className = "transplants";
  }

  async load(datasetId: string): Promise<void> {
    this.datasetId = datasetId;
    const [schema, records, classifiers] = await Promise.all([
      this.api.getSchema(),
      this.api.listTransplants(datasetId),
      this.api.listClassifiers(),
    ]);
    this.schema = schema;
    this.records = records;
    this.classifierIds = classifiers.map((c) => c.id);
    this.selectedClassifier = this.classifierIds[0] ?? "";
    this.page = 0;
    this.render();
  }

  render(): void {
    this.element.replaceChildren();
    const heading = document.createElement("h2");
    heading.textContent = `dataset ${this.datasetId} — ${this.records.length} cases`;
    this.element.append(heading);

    const pager = document.createElement("div");
    pager.className = "pager";
    const previous = document.createElement("button");
    previous.textContent = "previous";
    previous.disabled = this.page === 0;
    previous.addEventListener("click", () => {
      this.page -= 1;
      this.render();
    });
    const next = document.createElement("button");
    next.textContent = "next";
    next.disabled = (this.page + 1) * PAGE_SIZE >= this.records.length;
    next.addEventListener("click", () => {
      this.page += 1;
      this.render();
    });
    const where = document.createElement("span");
    where.textContent = ` page ${this.page + 1} `;
    pager.append(previous, where, next);
    this.element.append(pager);

    for (const record of pageOf(this.records, this.page)) {
      this.element.append(this.caseCard(record));
    }
  }

  private caseCard(record: RecordDoc): HTMLElement {
    const card = document.createElement("details");
    card.className = "case-card";
    card.dataset.caseId = String(record.case_id);
    const summary = document.createElement("summary");
    summary.textContent = `case ${record.case_id}`;
    card.append(summary);

    for (const group of ["donor", "recipient", "surgery"]) {
      const attrs = this.schema.attributes.filter((a) => a.group === group);
      if (attrs.length === 0) continue;
      const block = document.createElement("div");
      block.className = `group group-${group}`;
      const title = document.createElement("h4");
      title.textContent = group;
      block.append(title);
      const list = document.createElement("dl");
      for (const attr of attrs) {
        const dt = document.createElement("dt");
        dt.textContent = attr.name + (attr.unit ? ` (${attr.unit})` : "");
        const dd = document.createElement("dd");
        dd.className = `value-${attr.name}`;
        dd.textContent = formatValue(record.values[attr.name]);
        list.append(dt, dd);
      }
      block.append(list);
      card.append(block);
    }

    const applyBar = document.createElement("div");
    applyBar.className = "apply-bar";
    const select = document.createElement("select");
    select.className = "apply-classifier";
    for (const id of this.classifierIds) {
      const option = document.createElement("option");
      option.value = id;
      option.textContent = id;
      option.selected = id === this.selectedClassifier;
      select.append(option);
    }
    const result = document.createElement("div");
    result.className = "apply-result";

    const apply = async () => {
      this.selectedClassifier = select.value;
      try {
        const outcome = await this.api.applyClassifier(
          record.case_id, select.value, this.datasetId);
        result.replaceChildren();
        const line = document.createElement("p");
        line.className = "apply-score";
        line.textContent =
          `${outcome.score.risk}, ${outcome.score.soft_score} ` +
          `(psoft ${outcome.score.psoft_score}; ` +
          `${outcome.score.activated.length} activated rules)`;
        result.append(line, renderExplanationSets(outcome.explanations));
      } catch (err) {
        result.replaceChildren();
        const notice = document.createElement("p");
        notice.className = "notice";
        notice.textContent = (err as Error).message;
        const dismiss = document.createElement("button");
        dismiss.textContent = "dismiss";
        dismiss.addEventListener("click", () => notice.remove());
        notice.append(" ", dismiss);
        result.append(notice);
      }
    };

    const button = document.createElement("button");
    button.className = "apply";
    button.textContent = "apply classifier";
    button.addEventListener("click", () => void apply());
    select.addEventListener("change", () => void apply());

    applyBar.append(select, button);
    card.append(applyBar, result);
    return card;
  }
}
