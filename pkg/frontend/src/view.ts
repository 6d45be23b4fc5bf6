/**
 * DOM rendering for the annotation screens.
 *
 * Renders only the whitelisted fields of the server payload (definition,
 * guideline, presentation slots, progress). Anything else the server might
 * carry never reaches the DOM, so blinding holds even against a leaky
 * payload. Panels get the neutral names "Cluster A" / "Cluster B".
 */

import type { Choice, ExamplePayload, ItemPayload } from "./api.js";

export interface ChoiceOption {
  choice: Choice;
  label: string;
  key: string;
}

export const CHOICE_OPTIONS: ChoiceOption[] = [
  { choice: "first", label: "Cluster A", key: "1" },
  { choice: "second", label: "Cluster B", key: "2" },
  { choice: "both", label: "Fits both", key: "3" },
  { choice: "none", label: "Fits none", key: "4" },
];

const SLOT_NAMES: Record<string, string> = {
  first: "Cluster A",
  second: "Cluster B",
};

export interface ItemViewHandles {
  root: HTMLElement;
  submit: HTMLButtonElement;
  note: HTMLTextAreaElement;
  selected: () => Choice | null;
  select: (choice: Choice) => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** One example sentence; exactly the target token is wrapped and marked. */
export function renderExample(example: ExamplePayload): HTMLElement {
  const sentence = el("li", "example");
  example.tokens.forEach((token, i) => {
    if (i > 0) sentence.appendChild(document.createTextNode(" "));
    if (i === example.target_index) {
      const mark = el("mark", "target-token", token);
      sentence.appendChild(mark);
    } else {
      sentence.appendChild(document.createTextNode(token));
    }
  });
  return sentence;
}

export function renderItem(
  container: HTMLElement,
  payload: ItemPayload,
  onSubmit: (choice: Choice, note: string) => void,
): ItemViewHandles {
  container.replaceChildren();
  const root = el("div", "item-view");

  if (payload.progress) {
    root.appendChild(
      el(
        "div",
        "progress",
        `Item ${payload.progress.answered + 1} of ${payload.progress.total}`,
      ),
    );
  }

  const definition = el("div", "definition");
  definition.appendChild(el("h2", undefined, "Definition"));
  definition.appendChild(el("blockquote", "definition-text", payload.definition));
  root.appendChild(definition);

  root.appendChild(el("p", "guideline", payload.guideline));

  const panels = el("div", "panels");
  for (const panel of payload.panels) {
    const box = el("section", "panel");
    box.appendChild(el("h3", undefined, SLOT_NAMES[panel.slot] ?? panel.slot));
    const list = el("ul", "examples");
    for (const example of panel.examples) {
      list.appendChild(renderExample(example));
    }
    box.appendChild(list);
    panels.appendChild(box);
  }
  root.appendChild(panels);

  const form = el("fieldset", "choices");
  form.appendChild(el("legend", undefined, "Which cluster fits the definition?"));
  const inputs = new Map<Choice, HTMLInputElement>();
  for (const option of CHOICE_OPTIONS) {
    const row = el("label", "choice-row");
    const input = el("input") as HTMLInputElement;
    input.type = "radio";
    input.name = "choice";
    input.value = option.choice;
    inputs.set(option.choice, input);
    row.appendChild(input);
    row.appendChild(
      document.createTextNode(` ${option.label} `),
    );
    row.appendChild(el("kbd", undefined, option.key));
    form.appendChild(row);
  }
  root.appendChild(form);

  const note = el("textarea", "note") as HTMLTextAreaElement;
  note.placeholder = "Optional note";
  note.rows = 2;
  root.appendChild(note);

  const submit = el("button", "submit", "Submit") as HTMLButtonElement;
  submit.type = "button";
  submit.disabled = true;
  root.appendChild(submit);

  const selected = (): Choice | null => {
    for (const [choice, input] of inputs) {
      if (input.checked) return choice;
    }
    return null;
  };
  const refresh = () => {
    submit.disabled = selected() === null;
  };
  for (const input of inputs.values()) {
    input.addEventListener("change", refresh);
  }
  submit.addEventListener("click", () => {
    const choice = selected();
    if (choice !== null) {
      onSubmit(choice, note.value.trim());
    }
  });

  container.appendChild(root);
  return {
    root,
    submit,
    note,
    selected,
    select: (choice: Choice) => {
      const input = inputs.get(choice);
      if (input) {
        input.checked = true;
        refresh();
      }
    },
  };
}

export function renderCompletion(
  container: HTMLElement,
  resultsUrl: string,
): void {
  container.replaceChildren();
  const root = el("div", "completion");
  root.appendChild(el("h2", undefined, "All items answered"));
  root.appendChild(el("p", undefined, "Thank you! This session is complete."));
  const link = el("a", "results-link", "View results") as HTMLAnchorElement;
  link.href = resultsUrl;
  root.appendChild(link);
  container.appendChild(root);
}

export function renderError(
  container: HTMLElement,
  message: string,
  onRetry: () => void,
): HTMLButtonElement {
  container.replaceChildren();
  const root = el("div", "error");
  root.appendChild(el("p", "error-message", message));
  const retry = el("button", "retry", "Retry") as HTMLButtonElement;
  retry.type = "button";
  retry.addEventListener("click", onRetry);
  root.appendChild(retry);
  container.appendChild(root);
  return retry;
}
