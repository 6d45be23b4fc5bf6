/** Typed client for the annotation service HTTP endpoints. */

export interface ExamplePayload {
  tokens: string[];
  target_index: number;
}

export interface PanelPayload {
  slot: "first" | "second";
  examples: ExamplePayload[];
}

export interface ItemPayload {
  item_id: string;
  definition: string;
  guideline: string;
  panels: PanelPayload[];
  progress?: { answered: number; total: number };
}

export interface CompletedPayload {
  completed: true;
}

export interface SessionInfo {
  session_id: string;
  annotator_id: string;
  dataset_id: string;
  cursor: number;
  total: number;
}

export type Choice = "first" | "second" | "both" | "none";

export type SubmitResult = "accepted" | "duplicate";

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class AnnotationApi {
  constructor(private readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async getSession(annotator: string, dataset: string): Promise<SessionInfo> {
    const params = new URLSearchParams({ annotator, dataset });
    const resp = await fetch(this.url(`/session?${params}`));
    if (!resp.ok) {
      throw new ApiError(`session request failed (${resp.status})`, resp.status);
    }
    return (await resp.json()) as SessionInfo;
  }

  async getNextItem(
    sessionId: string,
  ): Promise<ItemPayload | CompletedPayload> {
    const params = new URLSearchParams({ session: sessionId });
    const resp = await fetch(this.url(`/items/next?${params}`));
    if (!resp.ok) {
      throw new ApiError(`next-item request failed (${resp.status})`, resp.status);
    }
    return (await resp.json()) as ItemPayload | CompletedPayload;
  }

  /**
   * Persist one choice. A 409 means this (item, annotator) pair was already
   * recorded: the caller should advance without resubmitting.
   */
  async submitRecord(
    sessionId: string,
    itemId: string,
    choice: Choice,
    note: string,
  ): Promise<SubmitResult> {
    const resp = await fetch(this.url("/records"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        session: sessionId,
        item_id: itemId,
        choice,
        note,
      }),
    });
    if (resp.status === 409) {
      return "duplicate";
    }
    if (!resp.ok) {
      throw new ApiError(`record rejected (${resp.status})`, resp.status);
    }
    return "accepted";
  }

  resultsUrl(dataset: string): string {
    const params = new URLSearchParams({ dataset });
    return this.url(`/results?${params}`);
  }
}

export function isCompleted(
  payload: ItemPayload | CompletedPayload,
): payload is CompletedPayload {
  return (payload as CompletedPayload).completed === true;
}
