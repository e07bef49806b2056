// Typed client for the workbench API.  Every number the UI shows comes out
// of these responses; nothing is recomputed client-side.

import type {
  ApplyResultDoc,
  ClassifierDoc,
  DatasetSummaryDoc,
  FindingDoc,
  RecordDoc,
  RuleDoc,
  RunDoc,
  RunSummaryDoc,
  SchemaDoc,
} from "./models.js";

export interface ApiError {
  status: number;
  detail: string;
  findings: FindingDoc[];
}

export class RequestFailed extends Error {
  constructor(public readonly error: ApiError) {
    super(`${error.status}: ${error.detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
    private readonly base: string = "/api/v1",
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      let findings: FindingDoc[] = [];
      try {
        const doc = await response.json();
        detail = typeof doc.detail === "string" ? doc.detail : JSON.stringify(doc.detail);
        findings = Array.isArray(doc.findings) ? doc.findings : [];
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new RequestFailed({ status: response.status, detail, findings });
    }
    if (response.status === 204) {
      return undefined as T;
    }
    return (await response.json()) as T;
  }

  getSchema(): Promise<SchemaDoc> {
    return this.request("GET", "/schema");
  }

  listClassifiers(): Promise<ClassifierDoc[]> {
    return this.request("GET", "/classifiers");
  }

  getClassifier(id: string): Promise<ClassifierDoc> {
    return this.request("GET", `/classifiers/${id}`);
  }

  updateClassifier(doc: ClassifierDoc): Promise<ClassifierDoc> {
    return this.request("PUT", `/classifiers/${doc.id}`, doc);
  }

  createClassifier(doc: ClassifierDoc): Promise<ClassifierDoc> {
    return this.request("POST", "/classifiers", doc);
  }

  cloneClassifier(id: string, newId?: string, newName?: string): Promise<ClassifierDoc> {
    return this.request("POST", `/classifiers/${id}/clone`,
      { new_id: newId ?? null, new_name: newName ?? null });
  }

  deleteClassifier(id: string, force = false): Promise<void> {
    return this.request("DELETE", `/classifiers/${id}${force ? "?force=true" : ""}`);
  }

  previewRule(rule: Pick<RuleDoc, "label" | "value" | "conditions">): Promise<string> {
    return this.request<{ lppf: string }>("POST", "/preview/rule", {
      label: rule.label,
      value: rule.value,
      conditions: rule.conditions,
    }).then((doc) => doc.lppf);
  }

  listDatasets(): Promise<DatasetSummaryDoc[]> {
    return this.request("GET", "/datasets");
  }

  createDataset(id: string, synthesize: { n: number; seed: number }): Promise<unknown> {
    return this.request("POST", "/datasets", { id, synthesize });
  }

  runClassifier(classifierId: string, datasetId: string): Promise<RunDoc> {
    return this.request("POST", `/classifiers/${classifierId}/run?dataset=${datasetId}`);
  }

  listRuns(): Promise<RunSummaryDoc[]> {
    return this.request("GET", "/runs");
  }

  getRun(runId: string): Promise<RunDoc> {
    return this.request("GET", `/runs/${runId}`);
  }

  listTransplants(datasetId: string): Promise<RecordDoc[]> {
    return this.request("GET", `/transplants?dataset=${datasetId}`);
  }

  applyClassifier(caseId: number, classifierId: string,
                  datasetId: string): Promise<ApplyResultDoc> {
    return this.request(
      "POST", `/transplants/${caseId}/apply/${classifierId}?dataset=${datasetId}`);
  }
}
