/** Submission semantics: one persisted record per item, retries, 409s. */

import { beforeEach, describe, expect, it } from "vitest";

import { AnnotationApi } from "../src/api.js";
import { AnnotationApp } from "../src/app.js";
import { FakeServer, makeItem } from "./fakeServer.js";

function appContainer(): HTMLElement {
  document.body.innerHTML = "<main id='app'></main>";
  return document.getElementById("app")!;
}

async function settled(): Promise<void> {
  // let pending fetch/render chains finish: each timer tick runs after the
  // whole microtask queue has drained
  for (let i = 0; i < 3; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

describe("choice submission", () => {
  let server: FakeServer;
  let container: HTMLElement;
  let app: AnnotationApp;

  beforeEach(() => {
    server = new FakeServer([makeItem("it1"), makeItem("it2")]);
    server.install();
    container = appContainer();
    app = new AnnotationApp(new AnnotationApi(""), container);
  });

  it("persists a fits-none choice", async () => {
    await app.start("ann1", "dwug-en");
    const noneInput = container.querySelector<HTMLInputElement>(
      "input[value='none']",
    )!;
    noneInput.click();
    container.querySelector<HTMLButtonElement>("button.submit")!.click();
    await settled();
    expect(server.records).toHaveLength(1);
    expect(server.records[0]).toMatchObject({
      item_id: "it1",
      annotator_id: "ann1",
      choice: "none",
    });
  });

  it("double-clicking submit yields exactly one persisted record", async () => {
    await app.start("ann1", "dwug-en");
    container.querySelector<HTMLInputElement>("input[value='first']")!.click();
    const submit = container.querySelector<HTMLButtonElement>("button.submit")!;
    submit.click();
    submit.click(); // second click while the first request is in flight
    await settled();
    expect(server.records.filter((r) => r.item_id === "it1")).toHaveLength(1);
    const posts = server.requestLog.filter((l) => l.startsWith("POST"));
    expect(posts).toHaveLength(1);
  });

  it("advances without resubmitting on a 409 duplicate", async () => {
    // a record for it1 already exists (e.g. submitted from another tab)
    server.records.push({
      item_id: "it1",
      annotator_id: "ann1",
      choice: "both",
      note: "",
    });
    // the session cursor would normally skip it1; force the stale view by
    // emptying the log after session setup
    await app.start("ann1", "dwug-en");
    // ann1 already answered it1 so the app is on it2; answer it too
    container.querySelector<HTMLInputElement>("input[value='second']")!.click();
    container.querySelector<HTMLButtonElement>("button.submit")!.click();
    await settled();
    expect(server.records).toHaveLength(2);
    expect(container.textContent).toContain("session is complete");
  });

  it("duplicate POST leaves exactly one record server-side", async () => {
    const api = new AnnotationApi("");
    const first = await api.submitRecord("dwug-en/ann1", "it1", "first", "");
    const second = await api.submitRecord("dwug-en/ann1", "it1", "first", "");
    expect(first).toBe("accepted");
    expect(second).toBe("duplicate");
    expect(server.records).toHaveLength(1);
  });

  it("offline submit preserves the choice and delivers once on retry", async () => {
    await app.start("ann1", "dwug-en");
    container.querySelector<HTMLInputElement>("input[value='both']")!.click();
    server.failNextRequests = 1; // the POST fails, nothing persisted
    container.querySelector<HTMLButtonElement>("button.submit")!.click();
    await settled();
    expect(server.records).toHaveLength(0);
    expect(container.textContent).toContain("choice is preserved");

    // back online: retry restores the item with the selection intact
    container.querySelector<HTMLButtonElement>("button.retry")!.click();
    await settled();
    const submit = container.querySelector<HTMLButtonElement>("button.submit")!;
    expect(submit.disabled).toBe(false); // choice still selected
    const both = container.querySelector<HTMLInputElement>("input[value='both']")!;
    expect(both.checked).toBe(true);
    submit.click();
    await settled();
    expect(server.records).toHaveLength(1);
    expect(server.records[0].choice).toBe("both");
  });

  it("stores the optional note", async () => {
    await app.start("ann1", "dwug-en");
    container.querySelector<HTMLInputElement>("input[value='first']")!.click();
    const note = container.querySelector<HTMLTextAreaElement>("textarea.note")!;
    note.value = "ambiguous definition";
    container.querySelector<HTMLButtonElement>("button.submit")!.click();
    await settled();
    expect(server.records[0].note).toBe("ambiguous definition");
  });

  it("shows a retry affordance when loading fails", async () => {
    server.failNextRequests = 1;
    await app.loadNext("dwug-en/ann1");
    expect(container.textContent).toContain("Could not load");
    container.querySelector<HTMLButtonElement>("button.retry")!.click();
    await settled();
    expect(container.querySelector("button.submit")).not.toBeNull();
  });
});
